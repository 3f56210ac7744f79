"""Type-II points of the Berkovich projective line, Möbius maps and directions.

Every type-II point other than those "at infinity" is a closed disk
``B(c, r^q)`` in the field of Puiseux series, and in fact every type-II
point is such a disk: the point lying toward infinity from a disk is again
a (larger) disk.  So a single finite chart suffices.  Disks are stored in
canonical form: the center is truncated to its terms of exponent below
``q``, which determines the disk and makes equality structural.

Classical points are :class:`PuiseuxSeries` values, the sentinel
:data:`CLASSICAL_INFINITY`, or homogeneous pairs ``(a0, a1)`` standing for
``a1/a0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientPrecision, SamePoint, UnsupportedPointType
from .gaussian import GaussianRational, frac_text
from .residue import INFINITY_POINT, ResidueMap, ResiduePoint, moebius_residue_map
from .series import INFINITY, PuiseuxSeries, divide, t_power


class _ClassicalInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CLASSICAL_INFINITY"

    def __str__(self):
        return "∞"


CLASSICAL_INFINITY = _ClassicalInfinity()


def as_pair(a) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    """Homogeneous coordinates (a0, a1) of a classical point a = a1/a0."""
    if a is CLASSICAL_INFINITY:
        return PuiseuxSeries.zero(), PuiseuxSeries.one()
    if isinstance(a, tuple):
        a0, a1 = (PuiseuxSeries.coerce(x) for x in a)
        if a0.is_zero() and a1.is_zero():
            raise ValueError("(0, 0) is not a point of P^1")
        return a0, a1
    return PuiseuxSeries.one(), PuiseuxSeries.coerce(a)


def reduce_point(a) -> ResiduePoint:
    """Reduction of a classical point to P^1(C)."""
    a0, a1 = as_pair(a)
    v0 = a0.valuation()
    v1 = a1.valuation()
    v = min(v0, v1)
    r0 = a0.shift(-v).reduce() if v0 != INFINITY else GaussianRational(0)
    r1 = a1.shift(-v).reduce() if v1 != INFINITY else GaussianRational(0)
    if not r0:
        return INFINITY_POINT
    return ResiduePoint.exact(r1 / r0)


class Moebius:
    """A Möbius transformation z ↦ (a z + b)/(c z + d) with Puiseux entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = PuiseuxSeries.coerce(a)
        self.b = PuiseuxSeries.coerce(b)
        self.c = PuiseuxSeries.coerce(c)
        self.d = PuiseuxSeries.coerce(d)
        if self.determinant().is_zero():
            raise ValueError("degenerate Möbius transformation")

    @classmethod
    def identity(cls) -> Moebius:
        return cls(1, 0, 0, 1)

    @classmethod
    def inversion(cls) -> Moebius:
        return cls(0, 1, 1, 0)

    @classmethod
    def affine(cls, alpha, beta) -> Moebius:
        return cls(alpha, beta, 0, 1)

    def determinant(self) -> PuiseuxSeries:
        return self.a * self.d - self.b * self.c

    def entries(self):
        return self.a, self.b, self.c, self.d

    def __matmul__(self, other: Moebius) -> Moebius:
        """Composition self ∘ other."""
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> Moebius:
        return Moebius(self.d, -self.b, -self.c, self.a)

    def is_affine(self) -> bool:
        return self.c.is_zero()

    def apply_pair(self, a):
        """Image of a classical point, returned in homogeneous coordinates."""
        z0, z1 = as_pair(a)
        return self.c * z1 + self.d * z0, self.a * z1 + self.b * z0

    def apply(self, a):
        """Image of a classical point as a series (or CLASSICAL_INFINITY)."""
        w0, w1 = self.apply_pair(a)
        if w0.is_zero():
            return CLASSICAL_INFINITY
        return divide(w1, w0)

    def projectively_equal(self, other: Moebius) -> bool:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        pairs = [(a, e), (b, f), (c, g), (d, h)]
        for x, y in pairs:
            for u, w in pairs:
                if not (x * w - y * u).is_zero():
                    return False
        return True

    def residue_map(self) -> ResidueMap:
        """Reduction as a map of P^1(C); requires an element of PGL(2, O)·K*."""
        ents = self.entries()
        v = min(x.valuation() for x in ents)
        a, b, c, d = (x.shift(-v).reduce() for x in ents)
        if not (a * d - b * c):
            raise ValueError("Möbius map does not have good reduction")
        return moebius_residue_map(a, b, c, d)

    def __eq__(self, other):
        return isinstance(other, Moebius) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def pretty(self) -> str:
        a, b, c, d = self.entries()
        if c.is_zero() and d == PuiseuxSeries.one():
            lin = f"({a.pretty()})*z" if len(a.terms) > 1 else f"{a.pretty()}*z"
            return lin if b.is_zero() else f"{lin} + {b.pretty()}"
        return f"(({a.pretty()})*z + ({b.pretty()}))/(({c.pretty()})*z + ({d.pretty()}))"

    def __repr__(self):
        return f"Moebius({self.pretty()})"


@dataclass(frozen=True)
class TypeIIPoint:
    """The type-II point of the closed disk B(center, r^q), in canonical form."""

    center: PuiseuxSeries
    q: Fraction

    def __init__(self, center, q):
        if not isinstance(q, (int, Fraction)):
            raise UnsupportedPointType("only disks with rational radius exponent (type II) are supported")
        q = Fraction(q)
        center = PuiseuxSeries.coerce(center)
        if center.precision is not None and center.precision < q:
            raise InsufficientPrecision("disk center is not known to the radius")
        center = center.truncate(q)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "q", q)

    @classmethod
    def gauss(cls) -> TypeIIPoint:
        return GAUSS_POINT

    @property
    def radius_exp(self) -> Fraction:
        return self.q

    def is_gauss(self) -> bool:
        return self.q == 0 and self.center.is_zero()

    def chart(self) -> Moebius:
        """Canonical chart w ↦ t^q w + center, sending the Gauss point here."""
        return Moebius(t_power(self.q), self.center, 0, 1)

    def contains_point(self, a) -> bool:
        if a is CLASSICAL_INFINITY:
            return False
        if isinstance(a, tuple):
            a0, a1 = as_pair(a)
            if a0.is_zero():
                return False
            a = divide(a1, a0, precision=self.q + 1)
        diff = PuiseuxSeries.coerce(a) - self.center
        lv = diff.valuation_lower_bound()
        if lv >= self.q:
            return True
        if diff.terms and diff.terms[0][0] < self.q:
            return False
        raise InsufficientPrecision("cannot decide disk membership")

    def contains(self, other: TypeIIPoint) -> bool:
        """Disk containment other ⊆ self (equivalently self lies on [other, ∞])."""
        return other.q >= self.q and self.contains_point(other.center)

    def canonical(self) -> str:
        return f"disk({self.center.canonical()}; {frac_text(self.q)})"

    def __str__(self):
        return f"B({self.center.pretty()}, r^{self.q})"

    def __repr__(self):
        return f"TypeIIPoint({self.center.pretty()!s}, {self.q})"


GAUSS_POINT = TypeIIPoint(PuiseuxSeries.zero(), 0)


@dataclass(frozen=True)
class DirectionLabel:
    """A tangent direction at a type-II base point, read in the base's canonical chart."""

    base: TypeIIPoint
    value: ResiduePoint

    def canonical(self) -> str:
        return f"dir({self.base.canonical()}; {self.value.canonical()})"

    def __str__(self):
        return f"→{self.base}:{self.value}"


def moebius_gauss_image(M: Moebius) -> TypeIIPoint:
    """M(S_G) as a canonical disk."""
    a, b, c, d = M.entries()
    vdet = M.determinant().valuation()
    vc = c.valuation()
    vd = d.valuation()
    if vd < vc:
        q = vdet - 2 * vd
        center = divide(b, d, precision=q)
    else:
        q = vdet - 2 * vc
        center = divide(a, c, precision=q)
    return TypeIIPoint(center, q)


def moebius_image(M: Moebius, S: TypeIIPoint) -> TypeIIPoint:
    return moebius_gauss_image(M @ S.chart())


def join(S1: TypeIIPoint, S2: TypeIIPoint) -> TypeIIPoint:
    """Smallest disk containing both."""
    diff = S1.center - S2.center
    qj = min(S1.q, S2.q, diff.valuation())
    return TypeIIPoint(S1.center, qj)


def hyperbolic_distance(S1: TypeIIPoint, S2: TypeIIPoint) -> Fraction:
    """ρ(S1, S2) in units of log(1/r)."""
    J = join(S1, S2)
    return (S1.q - J.q) + (S2.q - J.q)


def on_segment(S: TypeIIPoint, S1: TypeIIPoint, S2: TypeIIPoint) -> bool:
    return hyperbolic_distance(S1, S) + hyperbolic_distance(S, S2) == hyperbolic_distance(S1, S2)


def on_segment_to_classical(S: TypeIIPoint, start: TypeIIPoint, a) -> bool:
    """Whether S lies on the segment [start, a] for a classical point a."""
    if a is CLASSICAL_INFINITY:
        return S.contains(start)
    if isinstance(a, tuple):
        a0, a1 = as_pair(a)
        if a0.is_zero():
            return S.contains(start)
        a = divide(a1, a0)
    J = join(start, TypeIIPoint(a, start.q))
    if not J.contains(S):
        return False
    return S.contains(start) or S.contains_point(a)


def _direction_from_gauss_to_disk(D: TypeIIPoint) -> ResiduePoint:
    if D.is_gauss():
        raise SamePoint("target coincides with the base point")
    if D.q > 0 and D.center.valuation_lower_bound() >= 0:
        return ResiduePoint.exact(D.center.reduce())
    return INFINITY_POINT


def direction_at(S: TypeIIPoint, target, chart: Moebius | None = None) -> DirectionLabel:
    """The direction at S toward ``target`` (classical point or type-II point).

    Labels are read in ``chart`` (default: the canonical chart of S).
    """
    B = chart if chart is not None else S.chart()
    Binv = B.inverse()
    if isinstance(target, TypeIIPoint):
        value = _direction_from_gauss_to_disk(moebius_image(Binv, target))
    else:
        value = reduce_point(Binv.apply_pair(target))
    return DirectionLabel(S, value)


def lift_label(label: DirectionLabel):
    """A classical point in the direction ``label`` (exact labels only)."""
    v = label.value
    if v.kind == "alg":
        raise ValueError("only exact labels can be lifted")
    rep = CLASSICAL_INFINITY if v.is_infinity() else PuiseuxSeries.constant(v.value)
    return label.base.chart().apply_pair(rep)


def direction_target(label: DirectionLabel) -> TypeIIPoint:
    """A type-II point inside the direction ``label`` (one step of size 1 away)."""
    B = label.base.chart()
    v = label.value
    if v.is_infinity():
        inner = TypeIIPoint(0, -1)
    elif v.kind == "exact":
        inner = TypeIIPoint(PuiseuxSeries.constant(v.value), 1)
    else:
        raise ValueError("only exact labels have explicit representatives")
    return moebius_image(B, inner)
