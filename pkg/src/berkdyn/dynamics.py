"""Dynamics near the Gauss point: images of type-II points, conjugated
reductions, directional and surplus local degrees, and the Gauss orbit.

Directions at a type-II point S are always read in the canonical chart of
S (see :meth:`TypeIIPoint.chart`).  For the orbit S_j = f^j(S_G) the map
from directions at S_j to directions at S_{j+1} is the reduction φ_j of
B_{j+1}⁻¹ ∘ f ∘ B_j, and the surplus at a direction is the order of the
hole form H_j there.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .berkovich import (GAUSS_POINT, DirectionLabel, Moebius, TypeIIPoint,
                        hyperbolic_distance, moebius_gauss_image)
from .errors import InsufficientPrecision, PrecisionExceeded
from .family import RationalMapFamily
from .reduction import ReducedMap, reduce_map
from .residue import ResiduePoint
from .series import t_power


def _default_cap(h: RationalMapFamily) -> int:
    m = 1
    for c in h.num + h.den:
        m = lcm(m, c.ramification)
    return max(4 * h.degree * m, 64)


def gauss_image_and_normalizer(h: RationalMapFamily, digit_cap: int | None = None):
    """Return (h(S_G), M) where M is a Möbius map with (M ∘ h)(S_G) = S_G.

    The recenter-and-rescale loop: while the reduction of M ∘ h is a constant
    γ, either invert (γ = ∞) or replace M by z ↦ (z − γ)/t^v, with v the
    valuation gained by subtracting γ.
    """
    cap = digit_cap if digit_cap is not None else _default_cap(h)
    try:
        return _normalize(h, cap)
    except InsufficientPrecision as exc:
        raise PrecisionExceeded(f"series precision exhausted: {exc}") from exc


def _normalize(h: RationalMapFamily, cap: int):
    g = h
    M = Moebius.identity()
    for _ in range(cap):
        R = reduce_map(g)
        if R.deg_phi > 0:
            return moebius_gauss_image(M.inverse()), M
        gamma = R.phi.constant_value()
        if gamma.is_infinity():
            step = Moebius.inversion()
        else:
            vmin = min(c.valuation_lower_bound() for c in g.num + g.den)
            shifted = [p - q * gamma.value for p, q in zip(g.num, g.den)]
            v = min(c.valuation_lower_bound() for c in shifted) - vmin
            if v <= 0:
                raise AssertionError("recentering did not gain valuation")
            step = Moebius(1, -gamma.value, 0, t_power(v))
        g = g.post_compose(step)
        M = step @ M
    raise PrecisionExceeded(f"image of the Gauss point not found within {cap} steps")


def image_of_gauss(h: RationalMapFamily, digit_cap: int | None = None) -> TypeIIPoint:
    return gauss_image_and_normalizer(h, digit_cap)[0]


def chart_inverse(S: TypeIIPoint) -> Moebius:
    """z ↦ (z − c)/t^q, the inverse of the canonical chart of S = B(c, r^q)."""
    tq = t_power(-S.q)
    return Moebius(tq, -S.center * tq, 0, 1)


def conjugated_reduction(h: RationalMapFamily, S: TypeIIPoint, digit_cap: int | None = None):
    """(reduction of A ∘ h ∘ B, B, A) with B the chart of S and A the inverse chart of h(S)."""
    B = S.chart()
    g = h.pre_compose(B) if not S.is_gauss() else h
    image = image_of_gauss(g, digit_cap)
    A = chart_inverse(image)
    R = reduce_map(g.post_compose(A) if not image.is_gauss() else g)
    return R, B, A


def image_point(h: RationalMapFamily, S: TypeIIPoint, digit_cap: int | None = None) -> TypeIIPoint:
    B = S.chart()
    return image_of_gauss(h.pre_compose(B) if not S.is_gauss() else h, digit_cap)


@dataclass(frozen=True)
class DirectionalData:
    m: int
    s: int
    pushforward: DirectionLabel


def _label_value(v) -> ResiduePoint:
    return v.value if isinstance(v, DirectionLabel) else v


def directional_data(h: RationalMapFamily, S: TypeIIPoint, v) -> DirectionalData:
    """Directional degree, surplus and image direction of h at the direction v at S."""
    R, B, A = conjugated_reduction(h, S)
    z = _label_value(v)
    target = moebius_gauss_image(A.inverse())
    return DirectionalData(R.phi.local_degree(z), R.surplus_at(z),
                           DirectionLabel(target, R.phi(z)))


def target_rescaling(f: RationalMapFamily, n: int) -> Moebius:
    """A_n with (A_n ∘ f^n)(S_G) = S_G, namely the inverse chart of f^n(S_G)."""
    orbit = Orbit(f, max(n - 1, 0))
    return chart_inverse(orbit.point(n))


@dataclass(frozen=True)
class OrbitStep:
    index: int
    point: TypeIIPoint
    chart: Moebius
    reduction: ReducedMap
    local_degree: int
    step_distance: Fraction

    def to_json(self) -> dict:
        return {
            "j": self.index,
            "center": self.point.center.canonical(),
            "q": f"{self.point.q.numerator}/{self.point.q.denominator}",
            "local_degree": self.local_degree,
            "rho_increment": f"{self.step_distance.numerator}/{self.step_distance.denominator}",
            "reduction": self.reduction.pretty(),
        }


class Orbit:
    """The orbit S_j = f^j(S_G) with per-step reductions, extended on demand."""

    def __init__(self, f: RationalMapFamily, N: int = 0, digit_cap: int | None = None):
        if f.degree < 2:
            raise ValueError("orbit data needs degree at least 2")
        self.f = f
        self.d = f.degree
        self.digit_cap = digit_cap
        self._points = [GAUSS_POINT]
        self._steps: list[OrbitStep] = []
        self._dir_cache: dict = {}
        self._pre_cache: dict = {}
        self.extend(N)

    # construction ---------------------------------------------------
    def extend(self, N: int) -> None:
        """Make steps 0..N available."""
        while len(self._steps) <= N:
            j = len(self._steps)
            S = self._points[j]
            R, B, A = conjugated_reduction(self.f, S, self.digit_cap)
            nxt = moebius_gauss_image(A.inverse())
            if len(self._points) == j + 1:
                self._points.append(nxt)
            self._steps.append(OrbitStep(j, S, B, R, R.deg_phi, hyperbolic_distance(S, nxt)))

    def step(self, j: int) -> OrbitStep:
        self.extend(j)
        return self._steps[j]

    def point(self, j: int) -> TypeIIPoint:
        if j >= len(self._points):
            self.extend(j - 1)
        return self._points[j]

    @property
    def steps(self) -> list[OrbitStep]:
        return list(self._steps)

    def __len__(self):
        return len(self._steps)

    def __getitem__(self, j):
        return self._steps[j]

    def __iter__(self):
        return iter(self._steps)

    # per-step tangent data -----------------------------------------
    def directional(self, j: int, value: ResiduePoint) -> tuple[int, int, ResiduePoint]:
        """(m, s, image label) for f at S_j in the direction ``value``."""
        key = (j, value)
        hit = self._dir_cache.get(key)
        if hit is None:
            R = self.step(j).reduction
            hit = (R.phi.local_degree(value), R.surplus_at(value), R.phi(value))
            self._dir_cache[key] = hit
        return hit

    def preimages(self, j: int, value: ResiduePoint) -> tuple:
        """Directions at S_j mapped by f onto ``value`` at S_{j+1}, with local degrees."""
        key = (j, value)
        hit = self._pre_cache.get(key)
        if hit is None:
            hit = tuple(self.step(j).reduction.phi.preimages(value))
            self._pre_cache[key] = hit
        return hit

    def degree_at_gauss(self, n: int) -> int:
        """deg_{S_G}(f^n) as the product of the step degrees."""
        out = 1
        for j in range(n):
            out *= self.step(j).local_degree
        return out

    # iterated data ---------------------------------------------------
    def iterated(self, value: ResiduePoint, n: int, start: int = 0) -> tuple[int, int, ResiduePoint]:
        """(m_v(f^n), s_v(f^n), (f^n)_* v) for v at S_start.

        Uses m_v(f^{k+1}) = m_v(f^k)·m_w(f) and
        s_v(f^{k+1}) = m_v(f^k)·s_w(f) + d·s_v(f^k), with w = (f^k)_* v.
        """
        m, s, w = 1, 0, value
        for j in range(start, start + n):
            mj, sj, w2 = self.directional(j, w)
            s = m * sj + self.d * s
            m *= mj
            w = w2
        return m, s, w

    def pullback(self, value: ResiduePoint, n: int, start: int = 0) -> dict:
        """{v at S_start: m_v(f^n)} over directions with (f^n)_* v = value at S_{start+n}."""
        level = {value: 1}
        for j in range(start + n - 1, start - 1, -1):
            nxt = defaultdict(int)
            for w, mult in level.items():
                for v, k in self.preimages(j, w):
                    nxt[v] += mult * k
            level = dict(nxt)
        return level

    def surplus_support(self, n: int, start: int = 0) -> dict:
        """{v at S_start: s_v(f^n)} for the directions with positive surplus."""
        cands = set()
        for j in range(start, start + n):
            for w, _ in self.step(j).reduction.divisor():
                cands.update(self.pullback(w, j - start, start).keys())
        out = {}
        for v in cands:
            s = self.iterated(v, n, start)[1]
            if s:
                out[v] = s
        return dict(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


def orbit_of_gauss(f: RationalMapFamily, N: int, digit_cap: int | None = None) -> Orbit:
    return Orbit(f, N, digit_cap)


def iterated_directional_data(orbit: Orbit, v, n: int):
    """(m_v(f^n), s_v(f^n), (f^n)_* v as a DirectionLabel at S_n)."""
    m, s, w = orbit.iterated(_label_value(v), n)
    return m, s, DirectionLabel(orbit.point(n), w)
