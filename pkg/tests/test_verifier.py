from fractions import Fraction

import numpy as np
import pytest

from berkdyn.errors import AtomsTooClose, DegreeDropped
from berkdyn.family import RationalMapFamily
from berkdyn.measures import AtomicComplexMeasure
from berkdyn.residue import INFINITY_POINT, ResiduePoint
from berkdyn.series import parse_series
from berkdyn.verifier import (ComplexMapInstance, backward_orbit_measure, backward_step, chordal,
                              compare_measures, convergence_study, specialize, to_homogeneous)

E = ResiduePoint.exact
P = parse_series
F7 = RationalMapFamily([0, P("t^(-1)"), 1], [1])
GOLDEN = AtomicComplexMeasure({E(-1): Fraction(1, 4), E(0): Fraction(1, 4), INFINITY_POINT: Fraction(1, 2)})


def test_specialize():
    g = specialize(F7, 0.01)
    assert np.allclose(g.num, [0, 100, 1], rtol=1e-14) and np.allclose(g.den, [1, 0, 0])
    assert g(1.0) == pytest.approx(101.0)
    h = specialize(RationalMapFamily([0, P("t^(1/2)")], [1]), -0.25)
    assert h.num[1] == pytest.approx(0.5j)


@pytest.mark.parametrize("t0", [0, 1, 2.5])
def test_specialize_rejects_out_of_range(t0):
    with pytest.raises(ValueError):
        specialize(F7, t0)


def test_degree_drop_detected():
    with pytest.raises(DegreeDropped):
        ComplexMapInstance.from_coefficients([1, 1], [1, 1])


def test_chordal_metric():
    a = to_homogeneous([0, 1, complex("inf"), -1])
    assert chordal(a[0], a[2]) == pytest.approx(1.0)
    assert chordal(a[1], a[3]) == pytest.approx(1.0)
    assert chordal(a[0], a[1]) == pytest.approx(2 ** -0.5)
    assert chordal(a[1], a[1]) == pytest.approx(0.0)


def test_backward_step_inverts_forward_map():
    g = ComplexMapInstance.from_coefficients([1, 2, 0, 1], [3, 0, 1, 0])
    rng = np.random.default_rng(1)
    w = rng.normal(size=50) + 1j * rng.normal(size=50)
    pts = to_homogeneous(w)
    for k in range(3):
        pre = backward_step(g, pts, np.full(50, k))
        z = pre[:, 0] / pre[:, 1]
        assert np.allclose([g(x) for x in z], w, rtol=1e-8)


def test_square_measure_lives_on_unit_circle():
    g = ComplexMapInstance.from_coefficients([0, 0, 1], [1])
    emp = backward_orbit_measure(g, 5000, seed=3)
    assert np.allclose(np.abs(emp.points()), 1.0)


def test_chebyshev_measure_is_real_interval():
    g = ComplexMapInstance.from_coefficients([-2, 0, 1], [1])
    z = backward_orbit_measure(g, 5000, seed=4).points()
    assert np.max(np.abs(z.imag)) < 1e-6 and np.max(np.abs(z.real)) <= 2 + 1e-9


def test_determinism_across_workers():
    g = specialize(F7, 1e-2)
    a = backward_orbit_measure(g, 20000, seed=11)
    b = backward_orbit_measure(g, 20000, seed=11, workers=4)
    assert np.array_equal(a.samples, b.samples)
    c = backward_orbit_measure(g, 20000, seed=12)
    assert not np.array_equal(a.samples, c.samples)


def test_negative_control():
    g = ComplexMapInstance.from_coefficients([0, 0, 1], [1])
    emp = backward_orbit_measure(g, 5000, seed=0)
    rep = compare_measures(emp, AtomicComplexMeasure({E(0): 1}), eps=0.05)
    assert rep.max_deviation > 0.99


def test_atoms_too_close():
    emp = backward_orbit_measure(specialize(F7, 1e-2), 100)
    close = AtomicComplexMeasure({E(0): Fraction(1, 2), E(Fraction(1, 20)): Fraction(1, 2)})
    with pytest.raises(AtomsTooClose):
        compare_measures(emp, close, eps=0.05)


def test_comparison_bookkeeping():
    emp = backward_orbit_measure(specialize(F7, 1e-3), 20000, seed=5)
    partial = AtomicComplexMeasure({INFINITY_POINT: Fraction(1, 2)}, leftover=Fraction(1, 2))
    rep = compare_measures(emp, partial)
    assert rep.leftover == 0.5
    assert rep.unassigned == pytest.approx(0.5, abs=0.02)
    assert rep.rows[0]["predicted"] == "1/2"


def test_single_t_study():
    table = convergence_study(F7, [1e-3], n_samples=20000, predicted=GOLDEN)
    assert len(table.rows) == 1 and table.passes(0.03)
    with pytest.raises(ValueError):
        convergence_study(F7, [1e-3, 1e-2], n_samples=10, predicted=GOLDEN)


def test_csv_output():
    emp = backward_orbit_measure(specialize(F7, 1e-2), 10)
    lines = emp.to_csv().splitlines()
    assert lines[0] == "re,im,is_infinity" and len(lines) == 11
