import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkdyn.berkovich import CLASSICAL_INFINITY
from berkdyn.dynamics import Orbit
from berkdyn.errors import (ExceptionalBase, HypothesisViolated, NotCaseII, NotStationary,
                            Undetermined)
from berkdyn.family import RationalMapFamily
from berkdyn.limit import (classify_case, delta_f_description, exceptional_fixed_check, is_exceptional,
                           limit_measure, nu_mass_exceptional_direction)
from berkdyn.reduction import gauss_totally_invariant_test
from berkdyn.residue import INFINITY_POINT, ResiduePoint
from berkdyn.series import parse_series
from strategies import random_family

E = ResiduePoint.exact
P = parse_series
F7 = RationalMapFamily([0, P("t^(-1)"), 1], [1])
SQUARE = RationalMapFamily([0, 0, 1], [1])
SAME = RationalMapFamily([P("t"), 0, 1], [0, 1])  # (z^2 + t)/z keeps S_G fixed


def test_exceptional_checks():
    assert exceptional_fixed_check(F7, CLASSICAL_INFINITY)
    assert not exceptional_fixed_check(F7, P("0"))
    assert exceptional_fixed_check(SQUARE, P("0"))
    # 1/z^2 swaps 0 and ∞
    swap = RationalMapFamily([1], [0, 0, 1])
    assert not exceptional_fixed_check(swap, P("0"))
    assert is_exceptional(swap, P("0")) and is_exceptional(swap, CLASSICAL_INFINITY)
    assert not is_exceptional(F7, P("2"))


def test_classify_golden_family():
    r = classify_case(F7)
    assert r.case == "II" and r.exceptional is CLASSICAL_INFINITY
    assert r.degrees[:4] == [1, 2, 2, 2]
    assert r.radius_exponents[:4] == [0, -1, -2, -4]
    assert json.loads(json.dumps(r.to_json()))["exceptional"] == "inf"


def test_classify_refuses_good_reduction():
    with pytest.raises(HypothesisViolated):
        classify_case(SQUARE)


def test_classify_same_skeleton_family():
    r = classify_case(SAME)
    assert r.case == "I"
    assert all(k == 1 for k in r.degrees)


def test_classify_constant_shift_is_case_one():
    r = classify_case(RationalMapFamily([P("t^(-1)"), 0, 1], [1]))
    assert r.case == "I" and r.exceptional is None


def test_classify_undetermined_with_short_horizon():
    # the degree ratio is still 1/4 after three steps
    r = classify_case(SAME, window=1, horizon=1)
    assert r.case == "Undetermined"
    with pytest.raises(Undetermined):
        delta_f_description(SAME, window=1, horizon=1)


def test_nu_examples():
    nu = nu_mass_exceptional_direction(F7)
    assert nu.value == Fraction(1, 2) and nu.onset == 1 and not nu.identically
    cubic = RationalMapFamily([0, P("t^(-1)"), 0, 1], [1])
    assert nu_mass_exceptional_direction(cubic).value == Fraction(2, 3)
    with pytest.raises(NotCaseII):
        nu_mass_exceptional_direction(SAME)


def test_nu_requires_stationary_window():
    r = classify_case(F7, window=4, horizon=4)
    r.window = 5
    with pytest.raises(NotStationary):
        nu_mass_exceptional_direction(F7, report=r)


def test_limit_measure_golden():
    mu = limit_measure(F7)
    assert mu.atoms == {E(-1): Fraction(1, 4), E(0): Fraction(1, 4), INFINITY_POINT: Fraction(1, 2)}
    assert mu.leftover == 0 and mu.n_used <= 3
    assert json.loads(json.dumps(mu.to_json()))["leftover"] == "0/1"


def test_limit_measure_errors():
    with pytest.raises(HypothesisViolated):
        limit_measure(SQUARE)
    with pytest.raises(ExceptionalBase):
        limit_measure(F7, base=CLASSICAL_INFINITY)


def test_limit_measure_same_skeleton():
    # s_0(f^n) = 2^n - 1 and m_2(f^n) = 1, so the approximation never stabilizes
    mu = limit_measure(SAME, n_max=6)
    assert mu.n_used == 6
    assert mu.atoms == {E(0): Fraction(63, 64), E(2): Fraction(1, 64)}
    coarse = limit_measure(SAME, n_max=6, tol=Fraction(1, 10))
    assert coarse.n_used < 6


def test_delta_description():
    desc = delta_f_description(F7)
    assert desc.case == "II" and desc.nu == Fraction(1, 2) and desc.proper_inclusion
    assert desc.limit.atoms[INFINITY_POINT] == Fraction(1, 2)
    assert "Δ_f^† ⊊ Δ_f" in desc.text
    js = desc.to_json()
    assert js["nu_exceptional"] == "1/2" and js["exceptional"] == "inf"
    one = delta_f_description(SAME)
    assert one.case == "I" and one.nu is None


seeds = st.integers(0, 2**32 - 1)


def _bad_reduction_family(rng):
    while True:
        f = random_family(rng)
        if not gauss_totally_invariant_test(f):
            return f


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_mass_conservation_and_surplus_growth(seed):
    f = _bad_reduction_family(random.Random(seed))
    mu = limit_measure(f, n_max=4, tol=-1)
    for n, atoms, leftover in mu.history:
        assert sum(atoms.values(), Fraction(0)) + leftover == 1
    orbit = Orbit(f, 4)
    surplus = [Fraction(sum(orbit.surplus_support(n).values()), f.degree ** n) for n in range(1, 5)]
    assert surplus == sorted(surplus)
    assert all(0 <= s <= 1 for s in surplus)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_case_two_atom_matches_nu(seed):
    rng = random.Random(seed)
    d = rng.choice([2, 3])
    k = rng.randint(1, 3)
    num = [P("0"), P(f"t^(-{k})")] + [P("0")] * (d - 2) + [P("1")]
    f = RationalMapFamily(num, [P("1")], d)
    r = classify_case(f)
    assert r.case == "II"
    nu = nu_mass_exceptional_direction(f, report=r).value
    assert limit_measure(f).mass(INFINITY_POINT) == nu
