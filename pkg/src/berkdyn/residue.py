"""Residue-field computations: polynomials over Q(i) and points of P^1(C).

Everything here is exact.  Points of P^1(C) that are not Gaussian rationals
are represented by their monic minimal polynomial over Q(i) together with a
root index; the index refers to the roots sorted by (real, imaginary) part
at high working precision, and is only used to tell conjugates apart.

Factorization over Q(i) uses Trager's norm method on top of sympy's
factorization over Q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import count

import mpmath
import sympy

from .gaussian import I, ONE, ZERO, GaussianRational, frac_text

_DPS = 60
_SORT_DIGITS = 40


class GPoly:
    """Dense univariate polynomial over Q(i), coefficients stored low to high."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(cs)
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> GPoly:
        return cls._raw((GaussianRational.coerce(c),))

    @classmethod
    def x(cls) -> GPoly:
        return cls._raw((ZERO, ONE))

    @classmethod
    def linear_root(cls, r) -> GPoly:
        """The monic polynomial x - r."""
        return cls._raw((-GaussianRational.coerce(r), ONE))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coefficient(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        if not isinstance(other, GPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __add__(self, other: GPoly) -> GPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return GPoly._raw(out)

    def __neg__(self):
        return GPoly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: GPoly) -> GPoly:
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GPoly):
            c = GaussianRational.coerce(other)
            return GPoly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return GPoly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return GPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> GPoly:
        result, base = GPoly.constant(ONE), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self) -> GPoly:
        if not self.coeffs:
            return self
        inv = self.lc().inverse()
        return GPoly._raw(tuple(c * inv for c in self.coeffs))

    def __divmod__(self, other: GPoly):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = other.lc().inverse()
        if len(rem) <= dq:
            return GPoly._raw(()), self
        quot = [ZERO] * (len(rem) - dq)
        ocs = other.coeffs
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv
            quot[k - dq] = q
            for j in range(dq + 1):
                if ocs[j]:
                    rem[k - dq + j] = rem[k - dq + j] - q * ocs[j]
        return GPoly._raw(quot), GPoly._raw(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> GPoly:
        return GPoly._raw(tuple(c * k for k, c in enumerate(self.coeffs) if k))

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: GPoly) -> GPoly:
        acc = GPoly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * inner + GPoly.constant(c)
        return acc

    def conjugate(self) -> GPoly:
        return GPoly._raw(tuple(c.conjugate() for c in self.coeffs))

    def is_rational(self) -> bool:
        return all(not c.im for c in self.coeffs)

    def divides_exactly(self, divisor: GPoly) -> tuple[bool, GPoly]:
        q, r = divmod(self, divisor)
        return (not r.coeffs), q

    def multiplicity_of(self, factor: GPoly) -> int:
        """Largest k with factor**k dividing self (self must be nonzero)."""
        if not self.coeffs:
            raise ValueError("multiplicity in the zero polynomial")
        k, p = 0, self
        while True:
            q, r = divmod(p, factor)
            if r.coeffs:
                return k
            k += 1
            p = q

    def approx_coeffs(self):
        return [mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                           mpmath.mpf(c.im.numerator) / c.im.denominator)
                for c in self.coeffs]

    def canonical(self, var: str = "x") -> str:
        return "[" + ", ".join(c.canonical() for c in self.coeffs) + "]"

    def pretty(self, var: str = "ζ") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
            if not mono:
                cs = str(c)
            elif c == 1:
                cs = ""
            elif c == -1:
                cs = "-"
            else:
                cs = f"({c})*" if c.re and c.im else f"{c}*"
            parts.append(cs + mono)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"GPoly({self.pretty('x')})"


def poly_gcd(a: GPoly, b: GPoly) -> GPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b.coeffs:
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(f: GPoly) -> list[tuple[GPoly, int]]:
    """Yun's algorithm: monic squarefree factors with multiplicities."""
    if f.degree <= 0:
        return []
    f = f.monic()
    out = []
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f // a0
    c = fp // a0
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b // a
        c = d // a
        d = c - b.derivative()
        k += 1
    return out


def _to_sympy_rational(p: GPoly):
    x = sympy.Symbol("x")
    coeffs = [sympy.Rational(c.re.numerator, c.re.denominator) for c in reversed(p.coeffs)]
    return sympy.Poly(coeffs, x, domain=sympy.QQ)


def _from_sympy(p) -> GPoly:
    cs = [GaussianRational(Fraction(int(c.p), int(c.q))) for c in reversed(p.all_coeffs())]
    return GPoly(cs)


def _shift_i(p: GPoly, s: int) -> GPoly:
    """p(x + s*i)."""
    if s == 0:
        return p
    return p.compose(GPoly._raw((I * s, ONE)))


@lru_cache(maxsize=20000)
def _factor_squarefree(g: GPoly) -> tuple[GPoly, ...]:
    if g.degree <= 1:
        return (g.monic(),) if g.degree == 1 else ()
    if g.is_rational():
        # factor over Q first; each rational factor is then split over Q(i)
        qs = _to_sympy_rational(g).factor_list()[1]
        if len(qs) > 1:
            out = []
            for p, _ in qs:
                out.extend(_factor_squarefree(_from_sympy(p).monic()))
            return tuple(sorted(out, key=poly_sort_key))
    for s in _shift_sequence():
        gs = _shift_i(g, s)
        norm = gs * gs.conjugate()
        nq = _to_sympy_rational(norm)
        if nq.gcd(nq.diff()).degree() > 0:
            continue
        factors = []
        for p, _ in nq.factor_list()[1]:
            h = poly_gcd(gs, _from_sympy(p))
            if h.degree > 0:
                factors.append(_shift_i(h, -s).monic())
        return tuple(sorted(factors, key=poly_sort_key))
    raise AssertionError("unreachable")


def _shift_sequence():
    yield 0
    for k in count(1):
        yield k
        yield -k


@lru_cache(maxsize=20000)
def factor(f: GPoly) -> tuple[tuple[GPoly, int], ...]:
    """Irreducible monic factors over Q(i) with multiplicities (constant dropped)."""
    out = []
    for part, k in squarefree_decomposition(f):
        for g in _factor_squarefree(part):
            out.append((g, k))
    out.sort(key=lambda gk: poly_sort_key(gk[0]))
    return tuple(out)


def poly_sort_key(p: GPoly):
    return (p.degree, tuple((c.re, c.im) for c in p.coeffs))


@lru_cache(maxsize=20000)
def approx_roots(g: GPoly) -> tuple:
    """High-precision roots of a squarefree polynomial, in canonical order."""
    if g.degree < 1:
        return ()
    with mpmath.workdps(_DPS):
        if g.degree == 1:
            c0, c1 = g.approx_coeffs()
            roots = [-c0 / c1]
        else:
            cs = list(reversed(g.approx_coeffs()))
            roots = mpmath.polyroots(cs, maxsteps=400, extraprec=4 * _DPS)
        roots = sorted(roots, key=_root_key)
    return tuple(roots)


def _root_key(z):
    scale = mpmath.mpf(10) ** _SORT_DIGITS
    return (int(mpmath.nint(z.real * scale)), int(mpmath.nint(z.imag * scale)))


def _approx_gauss(c: GaussianRational):
    return mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                      mpmath.mpf(c.im.numerator) / c.im.denominator)


# ---------------------------------------------------------------------
# points of P^1(C)


class ResiduePoint:
    """A point of P^1(C): infinity, a Gaussian rational, or an algebraic root."""

    __slots__ = ("kind", "value", "minpoly", "index", "_hash")

    def __init__(self, kind: str, value=None, minpoly: GPoly | None = None, index: int = 0):
        self.kind = kind
        self.value = value
        self.minpoly = minpoly
        self.index = index
        self._hash = None

    @classmethod
    def infinity(cls) -> ResiduePoint:
        return INFINITY_POINT

    @classmethod
    def exact(cls, value) -> ResiduePoint:
        return cls("exact", GaussianRational.coerce(value))

    @classmethod
    def algebraic(cls, minpoly: GPoly, index: int) -> ResiduePoint:
        minpoly = minpoly.monic()
        if minpoly.degree == 1:
            return cls.exact(-minpoly.coeffs[0])
        if not 0 <= index < minpoly.degree:
            raise ValueError("root index out of range")
        return cls("alg", None, minpoly, index)

    def is_infinity(self) -> bool:
        return self.kind == "inf"

    def is_exact(self) -> bool:
        return self.kind != "alg"

    def __eq__(self, other):
        if not isinstance(other, ResiduePoint):
            return NotImplemented
        return (self.kind == other.kind and self.value == other.value
                and self.minpoly == other.minpoly and self.index == other.index)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self.value, self.minpoly, self.index))
        return self._hash

    def sort_key(self):
        if self.kind == "exact":
            return (0, 1, (self.value.re, self.value.im), ())
        if self.kind == "alg":
            return (1, self.minpoly.degree, poly_sort_key(self.minpoly), (self.index,))
        return (2, 0, (), ())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def approx(self):
        """mpmath complex approximation, or None for infinity."""
        if self.kind == "inf":
            return None
        if self.kind == "exact":
            return _approx_gauss(self.value)
        return approx_roots(self.minpoly)[self.index]

    def to_complex(self) -> complex:
        z = self.approx()
        return complex("inf") if z is None else complex(z)

    def isolation_radius(self) -> float:
        """Radius of a disk around approx() containing no other conjugate root."""
        if self.kind != "alg":
            return 0.0
        roots = approx_roots(self.minpoly)
        z = roots[self.index]
        return float(min(abs(z - w) for k, w in enumerate(roots) if k != self.index)) / 3

    def canonical(self) -> str:
        if self.kind == "inf":
            return "inf"
        if self.kind == "exact":
            return self.value.canonical()
        return f"root({self.minpoly.canonical()}; {self.index})"

    def __str__(self):
        if self.kind == "inf":
            return "∞"
        if self.kind == "exact":
            return str(self.value)
        z = self.approx()
        return (f"root of {self.minpoly.pretty('x')} ≈ "
                f"{mpmath.nstr(z.real, 8)}{'+' if z.imag >= 0 else '-'}{mpmath.nstr(abs(z.imag), 8)}i")

    def __repr__(self):
        return f"ResiduePoint({self.canonical()})"


INFINITY_POINT = ResiduePoint("inf")


def point_from_approx_root(g: GPoly, z) -> ResiduePoint:
    """The root of irreducible ``g`` closest to the approximation ``z``."""
    roots = approx_roots(g)
    dists = [abs(z - w) for w in roots]
    k = min(range(len(roots)), key=lambda j: dists[j])
    return ResiduePoint.algebraic(g, k)


def roots_of_poly(p: GPoly) -> list[tuple[ResiduePoint, int]]:
    """Roots of a nonzero affine polynomial with multiplicities, in canonical order."""
    out = []
    for g, k in factor(p):
        for idx in range(g.degree):
            out.append((ResiduePoint.algebraic(g, idx), k))
    out.sort(key=lambda pk: pk[0].sort_key())
    return out


def multiplicity_at(p: GPoly, formal_degree: int, point: ResiduePoint) -> int:
    """Order of vanishing at ``point`` of the binary form given by ``p`` of ``formal_degree``."""
    if point.kind == "inf":
        return formal_degree - p.degree if p.coeffs else formal_degree
    if not p.coeffs:
        raise ValueError("order of the zero form")
    if point.kind == "exact":
        return p.multiplicity_of(GPoly.linear_root(point.value))
    return p.multiplicity_of(point.minpoly)


class Form:
    """Binary form of a given degree, stored through its affine part in ζ = X1/X0."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly: GPoly, degree: int):
        if poly.degree > degree:
            raise ValueError("affine part exceeds the formal degree")
        self.poly = poly
        self.degree = degree

    def __eq__(self, other):
        return isinstance(other, Form) and self.poly == other.poly and self.degree == other.degree

    def __hash__(self):
        return hash((self.poly, self.degree))

    def infinity_order(self) -> int:
        return self.degree - self.poly.degree

    def roots(self) -> list[tuple[ResiduePoint, int]]:
        out = roots_of_poly(self.poly) if self.poly.degree > 0 else []
        k = self.infinity_order()
        if k > 0:
            out.append((INFINITY_POINT, k))
        return out

    def order_at(self, point: ResiduePoint) -> int:
        return multiplicity_at(self.poly, self.degree, point)

    def pretty(self) -> str:
        """Factored homogeneous text in ζ0, ζ1 (ζ = ζ1/ζ0)."""
        if self.degree == 0:
            return str(self.poly.coefficient(0))
        factors = []
        lead = self.poly.lc()
        for g, k in factor(self.poly):
            if g.degree == 1:
                r = -g.coeffs[0]
                if not r:
                    text = "ζ1"
                else:
                    sign = "-" if _positive_looking(r) else "+"
                    mag = r if sign == "-" else -r
                    coeff = "" if mag == 1 else (f"({mag})" if mag.re and mag.im else f"{mag}")
                    text = f"(ζ1 {sign} {coeff}ζ0)"
            else:
                terms = []
                for j in range(g.degree, -1, -1):
                    c = g.coeffs[j]
                    if c:
                        terms.append(f"({c})*ζ1^{j}*ζ0^{g.degree - j}")
                text = "(" + " + ".join(terms) + ")"
            factors.append(text if k == 1 else f"{text}^{k}")
        k = self.infinity_order()
        if k:
            factors.insert(0, "ζ0" if k == 1 else f"ζ0^{k}")
        body = "*".join(factors) if factors else "1"
        return body if lead == 1 else f"{lead}*{body}"


def _positive_looking(c: GaussianRational) -> bool:
    return c.re > 0 or (c.re == 0 and c.im > 0)


# ---------------------------------------------------------------------
# rational maps over Q(i)


class ResidueMap:
    """A rational map [N : D] of degree k on P^1(C) with N, D coprime forms of degree k."""

    __slots__ = ("num", "den", "degree", "_hash")

    def __init__(self, num: GPoly, den: GPoly, degree: int):
        self.num = num
        self.den = den
        self.degree = degree
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, ResidueMap):
            return NotImplemented
        if self.degree != other.degree:
            return False
        # projective equality: N1 D2 = N2 D1
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self._hash is None:
            lead = self.num.lc() if self.num.coeffs else self.den.lc()
            inv = lead.inverse()
            self._hash = hash((self.degree, (self.num * inv).coeffs, (self.den * inv).coeffs))
        return self._hash

    def is_constant(self) -> bool:
        return self.degree == 0

    def constant_value(self) -> ResiduePoint:
        if self.degree != 0:
            raise ValueError("map is not constant")
        n, d = self.num.coefficient(0), self.den.coefficient(0)
        return INFINITY_POINT if not d else ResiduePoint.exact(n / d)

    def evaluate(self, point: ResiduePoint) -> ResiduePoint:
        return _evaluate(self, point)

    def __call__(self, point: ResiduePoint) -> ResiduePoint:
        return _evaluate(self, point)

    def fiber_form(self, target: ResiduePoint) -> tuple[GPoly, int]:
        """Affine part and formal degree of the form vanishing exactly on the fiber over target.

        For an algebraic target with minimal polynomial g of degree n this is
        the norm sum_j g_j N^j D^(n-j); its roots are the preimages of all the
        conjugates of the target, each with its local degree.
        """
        k = self.degree
        if target.kind == "inf":
            return self.den, k
        if target.kind == "exact":
            return self.num - self.den * target.value, k
        g = target.minpoly
        n = g.degree
        acc = GPoly._raw(())
        npow = [GPoly.constant(ONE)]
        for _ in range(n):
            npow.append(npow[-1] * self.num)
        dpow = [GPoly.constant(ONE)]
        for _ in range(n):
            dpow.append(dpow[-1] * self.den)
        for j in range(n + 1):
            c = g.coefficient(j)
            if c:
                acc = acc + npow[j] * dpow[n - j] * c
        return acc, n * k

    def preimages(self, target: ResiduePoint) -> list[tuple[ResiduePoint, int]]:
        return list(_preimages(self, target))

    def local_degree(self, point: ResiduePoint) -> int:
        if self.degree == 0:
            raise ValueError("local degree of a constant map")
        image = self.evaluate(point)
        poly, deg = self.fiber_form(image)
        return multiplicity_at(poly, deg, point)

    def pretty(self) -> str:
        if self.degree == 0:
            v = self.constant_value()
            return "∞" if v.is_infinity() else str(v)
        if self.den.degree == 0:
            return (self.num * self.den.lc().inverse()).pretty()
        return f"({self.num.pretty()})/({self.den.pretty()})"

    def __repr__(self):
        return f"ResidueMap({self.pretty()})"


@lru_cache(maxsize=200000)
def _evaluate(phi: ResidueMap, point: ResiduePoint) -> ResiduePoint:
    if phi.degree == 0:
        return phi.constant_value()
    if point.kind == "inf":
        n, d = phi.num.coefficient(phi.degree), phi.den.coefficient(phi.degree)
        return INFINITY_POINT if not d else ResiduePoint.exact(n / d)
    if point.kind == "exact":
        n, d = phi.num(point.value), phi.den(point.value)
        return INFINITY_POINT if not d else ResiduePoint.exact(n / d)
    g = point.minpoly
    nr = phi.num % g
    dr = phi.den % g
    if not dr.coeffs:
        return INFINITY_POINT
    beta = (nr * _inverse_mod(dr, g)) % g
    mp = _minimal_polynomial(beta, g)
    if mp.degree == 1:
        return ResiduePoint.exact(-mp.coeffs[0])
    with mpmath.workdps(_DPS):
        z = point.approx()
        num = mpmath.polyval(list(reversed(phi.num.approx_coeffs())), z)
        den = mpmath.polyval(list(reversed(phi.den.approx_coeffs())), z)
        return point_from_approx_root(mp, num / den)


@lru_cache(maxsize=50000)
def _preimages(phi: ResidueMap, target: ResiduePoint) -> tuple:
    if phi.degree == 0:
        raise ValueError("preimages under a constant map")
    poly, deg = phi.fiber_form(target)
    out = []
    for g, k in factor(poly):
        for idx in range(g.degree):
            p = ResiduePoint.algebraic(g, idx)
            if target.kind == "alg" and _evaluate(phi, p) != target:
                continue
            out.append((p, k))
    inf_order = deg - poly.degree
    if inf_order > 0:
        out.append((INFINITY_POINT, inf_order))
    out.sort(key=lambda pk: pk[0].sort_key())
    return tuple(out)


def _inverse_mod(a: GPoly, g: GPoly) -> GPoly:
    """Inverse of a modulo g (extended Euclid); g irreducible."""
    r0, r1 = g, a % g
    s0, s1 = GPoly._raw(()), GPoly.constant(ONE)
    while r1.degree > 0:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if not r1.coeffs:
        raise ZeroDivisionError("not invertible modulo the minimal polynomial")
    return (s1 * r1.lc().inverse()) % g


def _minimal_polynomial(beta: GPoly, g: GPoly) -> GPoly:
    """Minimal polynomial over Q(i) of the element beta of Q(i)[x]/(g)."""
    n = g.degree
    powers = [GPoly.constant(ONE)]
    for j in range(1, n + 1):
        powers.append((powers[-1] * beta) % g)
        vecs = [[p.coefficient(r) for r in range(n)] for p in powers[:j]]
        target = [powers[j].coefficient(r) for r in range(n)]
        sol = _solve_combination(vecs, target)
        if sol is not None:
            return GPoly([-c for c in sol] + [ONE])
    raise AssertionError("degree of a minimal polynomial exceeded the field degree")


def _solve_combination(vecs, target):
    """Coefficients c with sum c_i vecs[i] = target, or None."""
    n = len(target)
    m = len(vecs)
    rows = [[vecs[i][r] for i in range(m)] + [target[r]] for r in range(n)]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if rows[r][col]), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = rows[row][col].inverse()
        rows[row] = [x * inv for x in rows[row]]
        for r in range(n):
            if r != row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
    for r in range(row, n):
        if rows[r][m]:
            return None
    sol = [ZERO] * m
    for r, col in enumerate(pivots):
        sol[col] = rows[r][m]
    return sol


def moebius_residue_map(a, b, c, d) -> ResidueMap:
    """The degree-one map ζ ↦ (aζ + b)/(cζ + d) over Q(i)."""
    return ResidueMap(GPoly([b, a]), GPoly([d, c]), 1)


def point_text(p: ResiduePoint) -> str:
    return p.canonical()


def parse_point(text: str) -> ResiduePoint:
    """Inverse of :meth:`ResiduePoint.canonical` for exact points and infinity."""
    text = text.strip()
    if text in ("inf", "∞"):
        return INFINITY_POINT
    from .series import parse_series

    s = parse_series(text)
    if s.precision is not None or any(e != 0 for e, _ in s.terms):
        raise ValueError(f"not a residue-field constant: {text!r}")
    return ResiduePoint.exact(s.coefficient(0))


__all__ = [
    "GPoly", "Form", "ResidueMap", "ResiduePoint", "INFINITY_POINT", "factor",
    "poly_gcd", "squarefree_decomposition", "roots_of_poly", "multiplicity_at",
    "approx_roots", "moebius_residue_map", "frac_text",
]
