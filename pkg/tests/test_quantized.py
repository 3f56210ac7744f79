import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkdyn.berkovich import GAUSS_POINT, TypeIIPoint
from berkdyn.errors import CellMismatch, NotAdmissible, NotNested
from berkdyn.family import RationalMapFamily
from berkdyn.measures import AtomicComplexMeasure
from berkdyn.quantized import (AdmissiblePair, AnnulusCell, DirectionCell, Partition, QuantizedIterate,
                               QuantizedMeasure, VertexCell, degenerate_pullback, mu_from_omega,
                               omega_from_mu, project_measure, quantized_balance_check,
                               quantized_local_degree, quantized_pullback)
from berkdyn.residue import INFINITY_POINT, ResiduePoint
from berkdyn.series import parse_series
from strategies import random_direction, random_family

E = ResiduePoint.exact
P = parse_series
F7 = RationalMapFamily([0, P("t^(-1)"), 1], [1])
SQUARE = RationalMapFamily([0, 0, 1], [1])
S1 = TypeIIPoint(0, -1)
G = GAUSS_POINT
H = Fraction(1, 2)


def test_partition_cells():
    part = Partition([G, S1])
    assert part.toward_second == INFINITY_POINT and part.toward_first == E(0)
    assert part.cell_of(P("t")) == DirectionCell(G, E(0))
    assert part.cell_of(P("t^(-2)")) == DirectionCell(S1, INFINITY_POINT)
    assert part.cell_of(P("3*t^(-1)")) == DirectionCell(S1, E(3))
    assert part.cell_of(P("t^(-1/2)")) == AnnulusCell(G, S1)
    assert part.cell_of(S1) == VertexCell(S1)
    with pytest.raises(CellMismatch):
        part.check_cell(DirectionCell(G, INFINITY_POINT))
    with pytest.raises(CellMismatch):
        Partition.gauss().annulus()


def test_local_degree_examples():
    assert quantized_local_degree(F7, VertexCell(S1), VertexCell(G)) == 1
    assert quantized_local_degree(F7, AnnulusCell(G, S1), DirectionCell(G, INFINITY_POINT)) == 1
    assert quantized_local_degree(F7, VertexCell(S1), DirectionCell(G, E(0))) == 0
    assert quantized_local_degree(F7, DirectionCell(S1, INFINITY_POINT), DirectionCell(G, INFINITY_POINT)) == 2
    with pytest.raises(CellMismatch):
        quantized_local_degree(F7, VertexCell(G), DirectionCell(S1, E(1)))


def test_pullback_examples():
    part = Partition.gauss()
    omega = QuantizedMeasure(part, {DirectionCell(G, E(1)): 1})
    assert quantized_pullback(SQUARE, omega).masses == {DirectionCell(G, E(-1)): 1, DirectionCell(G, E(1)): 1}
    pulled = quantized_pullback(F7, QuantizedMeasure(Partition([G, S1]), {VertexCell(S1): 1}))
    assert pulled.masses == {VertexCell(G): 1, DirectionCell(G, INFINITY_POINT): 1}
    assert pulled.total == 2
    zero = quantized_pullback(F7, QuantizedMeasure(Partition([G, S1])))
    assert zero.total == 0
    with pytest.raises(CellMismatch):
        quantized_pullback(F7, omega)


def test_projection_examples():
    part = Partition([G, S1])
    omega = QuantizedMeasure(part, {AnnulusCell(G, S1): Fraction(1, 5), VertexCell(S1): Fraction(1, 5),
                                    DirectionCell(S1, INFINITY_POINT): Fraction(1, 5),
                                    VertexCell(G): Fraction(2, 5)})
    coarse = project_measure(omega, Partition.gauss())
    assert coarse.masses == {VertexCell(G): Fraction(2, 5), DirectionCell(G, INFINITY_POINT): Fraction(3, 5)}
    assert project_measure(omega, part) == omega
    with pytest.raises(NotNested):
        project_measure(coarse, part)


def test_balance_examples():
    part = Partition([G, S1])
    delta_inf = QuantizedMeasure(part, {DirectionCell(S1, INFINITY_POINT): 1})
    assert quantized_balance_check(F7, delta_inf) == (True, 0)
    assert quantized_balance_check(SQUARE, QuantizedMeasure(Partition.gauss(), {VertexCell(G): 1}))[0]
    ok, residual = quantized_balance_check(F7, QuantizedMeasure(part, {VertexCell(G): 1}))
    assert not ok and residual > 0


def test_balance_with_leftover_is_a_bound():
    part = Partition([G, S1])
    omega = QuantizedMeasure(part, {DirectionCell(S1, INFINITY_POINT): Fraction(9, 10)}, leftover=Fraction(1, 10))
    ok, residual = quantized_balance_check(F7, omega)
    assert ok and residual <= Fraction(1, 10)


def test_omega_mu_annulus_example():
    mu_C = AtomicComplexMeasure({INFINITY_POINT: H, E(0): Fraction(1, 4), E(-1): Fraction(1, 4)})
    mu_E = AtomicComplexMeasure({E(0): 1})
    omega = omega_from_mu(AdmissiblePair(mu_C, mu_E), F7)
    assert omega.mass(AnnulusCell(G, S1)) == H
    assert omega.mass(DirectionCell(G, E(0))) == Fraction(1, 4)
    assert omega.total == 1
    back = mu_from_omega(omega, F7)
    assert back.mu_C == mu_C and back.mu_E == mu_E


def test_omega_mu_same_skeleton():
    f = RationalMapFamily([P("t"), 0, 1], [0, 1])
    mu = AtomicComplexMeasure({E(2): H, INFINITY_POINT: H})
    omega = omega_from_mu(AdmissiblePair(mu, mu), f)
    assert omega.masses == {DirectionCell(G, INFINITY_POINT): H, DirectionCell(G, E(2)): H}
    assert omega.is_dagger()
    with pytest.raises(NotAdmissible) as info:
        omega_from_mu(AdmissiblePair(mu, AtomicComplexMeasure({E(2): 1})), f)
    assert info.value.branch == "pullback"


def test_inadmissible_annulus():
    pair = AdmissiblePair(AtomicComplexMeasure({INFINITY_POINT: Fraction(2, 5), E(1): Fraction(3, 5)}),
                          AtomicComplexMeasure({E(0): Fraction(2, 5), E(1): Fraction(3, 5)}))
    with pytest.raises(NotAdmissible) as info:
        omega_from_mu(pair, F7)
    assert info.value.branch == "annulus"


def test_mu_from_omega_vertex_masses():
    part = Partition([G, S1])
    omega = QuantizedMeasure(part, {VertexCell(G): Fraction(1, 3), VertexCell(S1): Fraction(1, 3),
                                    DirectionCell(G, E(2)): Fraction(1, 3)})
    pair = mu_from_omega(omega, F7)
    assert pair.mu_C.leftover == Fraction(1, 3) and pair.mu_C.mass(INFINITY_POINT) == Fraction(1, 3)
    assert pair.mu_E.leftover == Fraction(1, 3) and pair.mu_E.mass(E(0)) == Fraction(2, 3)


def test_degenerate_pullback():
    R = QuantizedIterate(F7).orbit.step(0).reduction
    got = degenerate_pullback(R, AtomicComplexMeasure({E(0): 1}))
    assert got == AtomicComplexMeasure({E(0): 1, INFINITY_POINT: 1})


# --- properties ------------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


def _cells(Q, rng, extra=()):
    """A few cells of S(Γ_{f^n}) including every vertex and the annulus."""
    part = Q.partition
    cells = [VertexCell(v) for v in part.vertices]
    if part.is_pair():
        cells.append(part.annulus())
    for base in part.vertices:
        for _ in range(3):
            v = random_direction(rng, extra)
            c = DirectionCell(base, v)
            try:
                part.check_cell(c)
            except CellMismatch:
                continue
            cells.append(c)
    return cells


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 2))
def test_row_sums_equal_degree(seed, n):
    rng = random.Random(seed)
    Q = QuantizedIterate(random_family(rng), n)
    for V in _cells(Q, rng):
        assert Q.row_sum(V) == Q.dn


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pullback_scales_mass_and_projection_preserves_it(seed):
    rng = random.Random(seed)
    Q = QuantizedIterate(random_family(rng), 1)
    cells = _cells(Q, rng)
    omega = QuantizedMeasure(Q.partition, {c: Fraction(rng.randint(0, 4), 7) for c in cells})
    assert Q.pullback(omega).total == Q.d * omega.total
    coarse = project_measure(omega, Q.gauss_partition)
    assert coarse.total == omega.total
    assert all(m >= 0 for m in coarse.masses.values())


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dagger_closure(seed):
    rng = random.Random(seed)
    Q = QuantizedIterate(random_family(rng), 1)
    cells = [c for c in _cells(Q, rng) if not isinstance(c, VertexCell)]
    omega = QuantizedMeasure(Q.partition, {c: 1 for c in cells})
    assert omega.is_dagger()
    assert project_measure(omega, Q.gauss_partition).is_dagger()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_transfer_of_degenerate_balance(seed):
    """(Ã∘f)^*μ_E = d·μ_C with admissibility gives a quantized-balanced ω_μ."""
    rng = random.Random(seed)
    f = random_family(rng)
    Q = QuantizedIterate(f, 1)
    R = Q.orbit.step(0).reduction
    extra = [p for p, _ in R.divisor()] + ([Q.toward_gauss] if Q.toward_gauss else [])
    weights = {}
    for _ in range(rng.randint(1, 3)):
        weights[random_direction(rng, extra)] = Fraction(rng.randint(1, 5))
    total = sum(weights.values())
    mu_E = AtomicComplexMeasure({k: v / total for k, v in weights.items()})
    pulled = degenerate_pullback(R, mu_E)
    mu_C = AtomicComplexMeasure({k: v / f.degree for k, v in pulled.atoms.items()})
    try:
        omega = omega_from_mu(AdmissiblePair(mu_C, mu_E), Q)
    except NotAdmissible:
        return
    assert Q.balance_check(omega) == (True, 0)
