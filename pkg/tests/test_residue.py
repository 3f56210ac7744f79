import random
from fractions import Fraction

import mpmath
from hypothesis import given, settings
from hypothesis import strategies as st

from berkdyn.gaussian import GaussianRational, I
from berkdyn.residue import (INFINITY_POINT, Form, GPoly, ResidueMap, ResiduePoint, factor,
                             moebius_residue_map, parse_point, poly_gcd, roots_of_poly,
                             squarefree_decomposition)

X = GPoly.x()
E = ResiduePoint.exact


def poly_from_roots(roots):
    p = GPoly.constant(1)
    for r in roots:
        p = p * GPoly.linear_root(r)
    return p


def test_factor_over_gaussian_rationals():
    # x^2 + 1 splits over Q(i)
    fs = factor(X * X + GPoly.constant(1))
    assert sorted(g.degree for g, _ in fs) == [1, 1]
    # x^2 - 2 does not
    fs = factor(X * X - GPoly.constant(2))
    assert [(g.degree, k) for g, k in fs] == [(2, 1)]


def test_factor_multiplicities():
    p = poly_from_roots([1, 1, I, -2, -2, -2])
    got = sorted(((g.coeffs, k) for g, k in factor(p)), key=repr)
    want = sorted(((GPoly.linear_root(r).coeffs, k) for r, k in [(1, 2), (I, 1), (-2, 3)]), key=repr)
    assert got == want


def test_squarefree_decomposition_product():
    p = poly_from_roots([3, 3, Fraction(1, 2)]) * (X * X - GPoly.constant(5))
    prod = GPoly.constant(1)
    for g, k in squarefree_decomposition(p):
        prod = prod * g ** k
    assert prod == p.monic()


def test_gcd():
    a = poly_from_roots([1, 2, I])
    b = poly_from_roots([2, I, 5])
    assert poly_gcd(a, b) == poly_from_roots([2, I])


def test_roots_of_irreducible_are_algebraic_and_ordered():
    roots = roots_of_poly(X ** 3 - GPoly.constant(2))
    assert len(roots) == 3
    assert all(p.kind == "alg" and k == 1 for p, k in roots)
    keys = [p.sort_key() for p, _ in roots]
    assert keys == sorted(keys)
    for p, _ in roots:
        assert abs(complex(p.approx()) ** 3 - 2) < 1e-12


def test_point_canonical_text_and_parse():
    assert INFINITY_POINT.canonical() == "inf"
    p = E(GaussianRational(Fraction(-1, 2), 3))
    assert p.canonical() == "-1/2+3/1i"
    assert parse_point(p.canonical()) == p
    q = ResiduePoint.algebraic(X * X - GPoly.constant(2), 1)
    assert q.canonical().startswith("root([")


def test_algebraic_degree_one_becomes_exact():
    assert ResiduePoint.algebraic(GPoly.linear_root(3), 0) == E(3)


def test_form_roots_with_infinity():
    H = Form(X, 2)  # ζ0 ζ1
    assert H.roots() == [(E(0), 1), (INFINITY_POINT, 1)]
    assert Form(GPoly.constant(1), 2).roots() == [(INFINITY_POINT, 2)]
    assert Form(GPoly.constant(1), 0).roots() == []
    assert H.pretty() == "ζ0*ζ1"


def test_residue_map_evaluation_and_degrees():
    phi = ResidueMap(X * X + X, GPoly.constant(1), 2)  # ζ^2 + ζ
    assert phi(E(-1)) == E(0)
    assert phi(INFINITY_POINT) == INFINITY_POINT
    assert phi.local_degree(E(-1)) == 1
    assert phi.local_degree(E(Fraction(-1, 2))) == 2
    assert phi.local_degree(INFINITY_POINT) == 2
    assert phi.preimages(E(0)) == [(E(-1), 1), (E(0), 1)]
    assert phi.preimages(E(Fraction(-1, 4))) == [(E(Fraction(-1, 2)), 2)]


def test_preimages_of_algebraic_target():
    phi = ResidueMap(X * X, GPoly.constant(1), 2)
    target = ResiduePoint.algebraic(X * X - GPoly.constant(2), 0)
    pre = phi.preimages(target)
    assert sum(k for _, k in pre) == 2
    for p, k in pre:
        assert phi(p) == target
        assert abs(complex(p.approx()) ** 2 - complex(target.approx())) < 1e-12


def test_projective_equality_of_maps():
    a = ResidueMap(X, GPoly.constant(1), 1)
    b = ResidueMap(X * 2, GPoly.constant(2), 1)
    assert a == b and hash(a) == hash(b)


def test_moebius_residue_map():
    m = moebius_residue_map(0, 1, 1, 0)  # ζ ↦ 1/ζ
    assert m(E(0)) == INFINITY_POINT
    assert m(E(2)) == E(Fraction(1, 2))


gauss_small = st.builds(GaussianRational, st.integers(-3, 3), st.integers(-2, 2))


@settings(max_examples=40, deadline=None)
@given(st.lists(gauss_small, min_size=1, max_size=4), st.lists(gauss_small, min_size=1, max_size=3),
       st.integers(0, 2**16))
def test_total_local_degree_over_random_targets(num, den, seed):
    """Σ_{v ∈ φ⁻¹(w)} m_v(φ) = deg φ for exact, algebraic and infinite targets."""
    n, d = GPoly(num), GPoly(den)
    if not n.coeffs or not d.coeffs:
        return
    g = poly_gcd(n, d)
    n, d = n // g, d // g
    k = max(n.degree, d.degree)
    if k == 0:
        return
    phi = ResidueMap(n, d, k)
    rng = random.Random(seed)
    targets = [INFINITY_POINT, E(0), E(GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5)))]
    targets.append(ResiduePoint.algebraic(X * X - GPoly.constant(rng.choice([2, 3, 5])), rng.randint(0, 1)))
    for w in targets:
        pre = phi.preimages(w)
        assert sum(m for _, m in pre) == k
        for v, m in pre:
            assert phi(v) == w
            assert phi.local_degree(v) == m


def test_high_precision_roots_are_accurate():
    p = X ** 4 - X * 3 + GPoly.constant(1)
    for r, _ in roots_of_poly(p):
        with mpmath.workdps(50):
            z = r.approx()
            assert abs(z ** 4 - 3 * z + 1) < mpmath.mpf(10) ** -40
