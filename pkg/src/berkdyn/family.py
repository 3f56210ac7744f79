"""Rational maps whose coefficients are Puiseux series (meromorphic families)."""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Sequence

from .berkovich import CLASSICAL_INFINITY, Moebius, as_pair
from .errors import InsufficientPrecision, InvalidFamily
from .gaussian import ONE, ZERO, GaussianRational
from .series import PuiseuxSeries

SeriesPoly = list  # coefficients low to high, PuiseuxSeries entries


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return out


def _pmul(p, q):
    if not p or not q:
        return []
    out = [PuiseuxSeries.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return out


def _pscale(p, c):
    return [x * c for x in p]


def _homogeneous_substitute(coeffs, deg, x0, x1):
    """Sum_j coeffs[j] * x1^j * x0^(deg-j) for series polynomials x0, x1."""
    pow0 = [[PuiseuxSeries.one()]]
    pow1 = [[PuiseuxSeries.one()]]
    for _ in range(deg):
        pow0.append(_pmul(pow0[-1], x0))
        pow1.append(_pmul(pow1[-1], x1))
    acc = []
    for j in range(deg + 1):
        c = coeffs[j] if j < len(coeffs) else PuiseuxSeries.zero()
        if c.is_zero():
            continue
        acc = _padd(acc, _pscale(_pmul(pow1[j], pow0[deg - j]), c))
    return acc


class RationalMapFamily:
    """h(z) = (a_0 + ... + a_d z^d) / (b_0 + ... + b_d z^d) over Puiseux series.

    The degree ``d`` is formal: both coefficient lists have length d + 1, and
    a valid family has nonzero homogeneous resultant.
    """

    __slots__ = ("num", "den", "degree", "_hash")

    def __init__(self, num: Sequence, den: Sequence, degree: int | None = None, validate: bool = True):
        num = [PuiseuxSeries.coerce(c) for c in num]
        den = [PuiseuxSeries.coerce(c) for c in den]
        if degree is None:
            degree = max(len(num), len(den)) - 1
        if len(num) > degree + 1 or len(den) > degree + 1:
            if any(not c.is_zero() for c in num[degree + 1:] + den[degree + 1:]):
                raise InvalidFamily("coefficient lists longer than the degree")
            num, den = num[:degree + 1], den[:degree + 1]
        zero = PuiseuxSeries.zero()
        num += [zero] * (degree + 1 - len(num))
        den += [zero] * (degree + 1 - len(den))
        self.num = tuple(num)
        self.den = tuple(den)
        self.degree = degree
        self._hash = None
        if degree < 1:
            raise InvalidFamily("degree must be at least 1")
        if validate:
            self.validate()

    @classmethod
    def polynomial(cls, coeffs: Sequence, validate: bool = True) -> RationalMapFamily:
        return cls(coeffs, [PuiseuxSeries.one()], degree=len(coeffs) - 1, validate=validate)

    @classmethod
    def from_moebius(cls, M: Moebius) -> RationalMapFamily:
        return cls([M.b, M.a], [M.d, M.c], degree=1, validate=False)

    @property
    def d(self) -> int:
        return self.degree

    def is_exact(self) -> bool:
        return all(c.is_exact() for c in self.num + self.den)

    def __eq__(self, other):
        return (isinstance(other, RationalMapFamily) and self.degree == other.degree
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # validity --------------------------------------------------------
    def validate(self) -> None:
        if not resultant_nonzero(self):
            raise InvalidFamily("homogeneous resultant of numerator and denominator vanishes")

    # composition ----------------------------------------------------
    def compose(self, inner: RationalMapFamily) -> RationalMapFamily:
        """self ∘ inner, as a family of degree deg(self)·deg(inner)."""
        x1 = list(inner.num)
        x0 = list(inner.den)
        num = _homogeneous_substitute(self.num, self.degree, x0, x1)
        den = _homogeneous_substitute(self.den, self.degree, x0, x1)
        return RationalMapFamily(num, den, degree=self.degree * inner.degree, validate=False)

    def iterate(self, n: int) -> RationalMapFamily:
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    def post_compose(self, M: Moebius) -> RationalMapFamily:
        """M ∘ self."""
        num = [M.a * p + M.b * q for p, q in zip(self.num, self.den)]
        den = [M.c * p + M.d * q for p, q in zip(self.num, self.den)]
        return RationalMapFamily(num, den, degree=self.degree, validate=False)

    def pre_compose(self, M: Moebius) -> RationalMapFamily:
        """self ∘ M."""
        x1 = [M.b, M.a]
        x0 = [M.d, M.c]
        num = _homogeneous_substitute(self.num, self.degree, x0, x1)
        den = _homogeneous_substitute(self.den, self.degree, x0, x1)
        return RationalMapFamily(num, den, degree=self.degree, validate=False)

    def conjugate(self, M: Moebius) -> RationalMapFamily:
        """M⁻¹ ∘ self ∘ M."""
        return self.pre_compose(M).post_compose(M.inverse())

    # evaluation ----------------------------------------------------
    def apply_pair(self, a):
        """Image of a classical point in homogeneous coordinates (exact)."""
        z0, z1 = as_pair(a)
        pow0 = [PuiseuxSeries.one()]
        pow1 = [PuiseuxSeries.one()]
        for _ in range(self.degree):
            pow0.append(pow0[-1] * z0)
            pow1.append(pow1[-1] * z1)
        w1 = PuiseuxSeries.zero()
        w0 = PuiseuxSeries.zero()
        for j in range(self.degree + 1):
            m = pow1[j] * pow0[self.degree - j]
            w1 = w1 + self.num[j] * m
            w0 = w0 + self.den[j] * m
        return w0, w1

    # text -----------------------------------------------------------
    def canonical(self) -> str:
        n = ", ".join(c.canonical() for c in self.num)
        d = ", ".join(c.canonical() for c in self.den)
        return f"num = [{n}]; den = [{d}]"

    def pretty(self) -> str:
        def poly(cs):
            parts = []
            for k in range(len(cs) - 1, -1, -1):
                c = cs[k]
                if c.is_zero():
                    continue
                mono = "" if k == 0 else "z" if k == 1 else f"z^{k}"
                if not mono:
                    parts.append(c.pretty())
                elif c == PuiseuxSeries.one():
                    parts.append(mono)
                elif c == -PuiseuxSeries.one():
                    parts.append(f"-{mono}")
                else:
                    cp = c.pretty()
                    compound = len(c.terms) > 1 or c.precision is not None or re.search(r"(?<![(^])[+-]", cp[1:]) is not None
                    cp = f"({cp})" if compound else cp
                    parts.append(f"{cp}*{mono}")
            if not parts:
                return "0"
            out = parts[0]
            for p in parts[1:]:
                out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
            return out

        top, bottom = poly(self.num), poly(self.den)
        return top if bottom == "1" else f"({top})/({bottom})"

    def __repr__(self):
        return f"RationalMapFamily({self.pretty()})"


# ---------------------------------------------------------------------
# resultant test


def _determinant(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def homogeneous_resultant(p: Sequence[GaussianRational], q: Sequence[GaussianRational], d: int):
    """Resultant of two binary forms of formal degree d given by coefficient lists."""
    n = 2 * d
    rows = []
    for shift in range(d):
        row = [ZERO] * n
        for j in range(d + 1):
            row[shift + j] = p[d - j]
        rows.append(row)
    for shift in range(d):
        row = [ZERO] * n
        for j in range(d + 1):
            row[shift + j] = q[d - j]
        rows.append(row)
    return _determinant(rows)


def resultant_nonzero(h: RationalMapFamily) -> bool:
    """Decide exactly whether the homogeneous resultant of h is nonzero.

    With t = s^m every coefficient becomes a Laurent polynomial in s; after
    clearing denominators the resultant is a polynomial in s whose degree is
    bounded, so evaluating it at that many + 1 integers decides the question.
    """
    coeffs = h.num + h.den
    if not all(c.is_exact() for c in coeffs):
        raise InsufficientPrecision("resultant test requires exact coefficients")
    m = 1
    lo, hi = Fraction(0), Fraction(0)
    for c in coeffs:
        m = lcm(m, c.ramification)
        for e, _ in c.terms:
            lo, hi = min(lo, e), max(hi, e)
    span = int((hi - lo) * m)
    bound = 2 * h.degree * span + 1
    for s0 in range(1, bound + 2):
        vals = [_evaluate_at_s(c, m, lo, s0) for c in coeffs]
        p, q = vals[:h.degree + 1], vals[h.degree + 1:]
        if homogeneous_resultant(p, q, h.degree):
            return True
    return False


def _evaluate_at_s(c: PuiseuxSeries, m: int, lo: Fraction, s0: int) -> GaussianRational:
    acc = ZERO
    for e, x in c.terms:
        acc = acc + x * (s0 ** int((e - lo) * m))
    return acc


def identity_family() -> RationalMapFamily:
    return RationalMapFamily([0, 1], [1, 0], degree=1, validate=False)


__all__ = ["RationalMapFamily", "resultant_nonzero", "homogeneous_resultant",
           "CLASSICAL_INFINITY"]
