"""Quantized measures on the partitions S(Γ_G) and S(Γ_{f^n}).

Γ_G = {S_G} cuts P^1 into {S_G} and the directions at S_G.  When
S_n = f^n(S_G) differs from S_G, Γ_{f^n} = {S_G, S_n} cuts it into the two
singletons, the directions at S_G other than the one toward S_n, the
directions at S_n other than the one toward S_G, and the annulus between
the two points.  Direction cells are labelled in the canonical chart of
their base point.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .berkovich import GAUSS_POINT, TypeIIPoint, direction_at
from .dynamics import Orbit
from .errors import BoundViolated, CellMismatch, NotAdmissible, NotNested
from .family import RationalMapFamily
from .measures import AtomicComplexMeasure, _frac, _rat
from .reduction import ReducedMap
from .residue import ResiduePoint


@dataclass(frozen=True)
class VertexCell:
    point: TypeIIPoint

    def canonical(self) -> str:
        return f"vertex({self.point.canonical()})"

    def sort_key(self):
        return (0, self.point.q, self.point.center.sort_key(), ())


@dataclass(frozen=True)
class DirectionCell:
    base: TypeIIPoint
    value: ResiduePoint

    def canonical(self) -> str:
        return f"dir({self.base.canonical()}; {self.value.canonical()})"

    def sort_key(self):
        return (1, self.base.q, self.base.center.sort_key(), self.value.sort_key())


@dataclass(frozen=True)
class AnnulusCell:
    inner: TypeIIPoint
    outer: TypeIIPoint

    def canonical(self) -> str:
        return f"annulus({self.inner.canonical()}; {self.outer.canonical()})"

    def sort_key(self):
        return (2, self.outer.q, self.outer.center.sort_key(), ())


Cell = VertexCell | DirectionCell | AnnulusCell


class Partition:
    """The partition S(Γ) for Γ a single type-II point or a pair of them."""

    def __init__(self, vertices):
        vertices = tuple(vertices)
        if len(vertices) == 2 and vertices[0] == vertices[1]:
            vertices = vertices[:1]
        if len(vertices) not in (1, 2):
            raise ValueError("partitions have one or two vertices")
        self.vertices = vertices
        if len(vertices) == 2:
            P0, P1 = vertices
            self.toward_second = direction_at(P0, P1).value
            self.toward_first = direction_at(P1, P0).value
        else:
            self.toward_second = self.toward_first = None

    @classmethod
    def gauss(cls) -> Partition:
        return cls([GAUSS_POINT])

    def is_pair(self) -> bool:
        return len(self.vertices) == 2

    def __eq__(self, other):
        return isinstance(other, Partition) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def annulus(self) -> AnnulusCell:
        if not self.is_pair():
            raise CellMismatch("a one-vertex partition has no annulus")
        return AnnulusCell(*self.vertices)

    def check_cell(self, cell) -> None:
        if isinstance(cell, VertexCell):
            ok = cell.point in self.vertices
        elif isinstance(cell, DirectionCell):
            ok = cell.base in self.vertices
            if ok and self.is_pair():
                forbidden = self.toward_second if cell.base == self.vertices[0] else self.toward_first
                ok = cell.value != forbidden
        elif isinstance(cell, AnnulusCell):
            ok = self.is_pair() and (cell.inner, cell.outer) == self.vertices
        else:
            ok = False
        if not ok:
            raise CellMismatch(f"{cell} is not a cell of this partition")

    def cell_of(self, point) -> Cell:
        """The cell containing a classical point or a type-II point."""
        if isinstance(point, TypeIIPoint) and point in self.vertices:
            return VertexCell(point)
        P0 = self.vertices[0]
        v0 = direction_at(P0, point).value
        if not self.is_pair() or v0 != self.toward_second:
            return DirectionCell(P0, v0)
        P1 = self.vertices[1]
        v1 = direction_at(P1, point).value
        if v1 != self.toward_first:
            return DirectionCell(P1, v1)
        return self.annulus()

    def coarsen(self, cell, target: Partition) -> Cell:
        """The cell of ``target`` containing ``cell`` (target ⊂ self)."""
        if target == self:
            return cell
        if not (self.is_pair() and not target.is_pair() and target.vertices[0] in self.vertices):
            raise NotNested("target skeleton is not contained in the source skeleton")
        keep = target.vertices[0]
        if isinstance(cell, VertexCell) and cell.point == keep:
            return cell
        if isinstance(cell, DirectionCell) and cell.base == keep:
            return cell
        if keep == self.vertices[0]:
            return DirectionCell(keep, self.toward_second)
        return DirectionCell(keep, self.toward_first)

    def canonical(self) -> str:
        return "gamma(" + "; ".join(v.canonical() for v in self.vertices) + ")"


class QuantizedMeasure:
    """Nonnegative masses on the cells of a partition, plus leftover mass."""

    def __init__(self, partition: Partition, masses=None, leftover=0, check: bool = True):
        self.partition = partition
        clean = defaultdict(Fraction)
        for cell, m in (masses or {}).items():
            m = _frac(m)
            if m < 0:
                raise ValueError(f"negative mass on {cell}")
            if check:
                partition.check_cell(cell)
            if m:
                clean[cell] += m
        self.masses = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))
        self.leftover = _frac(leftover)

    def mass(self, cell) -> Fraction:
        return self.masses.get(cell, Fraction(0))

    @property
    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0)) + self.leftover

    def is_dagger(self) -> bool:
        """No mass on vertex singletons."""
        return not any(isinstance(c, VertexCell) for c in self.masses)

    def __eq__(self, other):
        if not isinstance(other, QuantizedMeasure):
            return NotImplemented
        return (self.partition == other.partition and self.masses == other.masses
                and self.leftover == other.leftover)

    def scaled(self, c) -> QuantizedMeasure:
        c = _frac(c)
        return QuantizedMeasure(self.partition, {k: v * c for k, v in self.masses.items()},
                                self.leftover * c, check=False)

    def __repr__(self):
        inner = ", ".join(f"{k.canonical()}: {v}" for k, v in self.masses.items())
        return f"QuantizedMeasure({{{inner}}}, leftover={self.leftover})"

    def to_json(self) -> dict:
        return {
            "gamma": self.partition.canonical(),
            "cells": [{"cell": c.canonical(), "mass": _rat(m)} for c, m in self.masses.items()],
            "leftover": _rat(self.leftover),
        }


def project_measure(omega: QuantizedMeasure, target: Partition) -> QuantizedMeasure:
    out = defaultdict(Fraction)
    for cell, m in omega.masses.items():
        out[omega.partition.coarsen(cell, target)] += m
    return QuantizedMeasure(target, out, omega.leftover, check=False)


class QuantizedIterate:
    """Quantized operators of f^n between S(Γ_{f^n}) (source side) and S(Γ_G)."""

    def __init__(self, f_or_orbit, n: int = 1):
        # steps 0..n-1 determine S_n; nothing further is needed
        orbit = f_or_orbit if isinstance(f_or_orbit, Orbit) else Orbit(f_or_orbit, max(n - 1, 0))
        orbit.extend(max(n - 1, 0))
        self.orbit = orbit
        self.n = n
        self.d = orbit.d
        self.dn = orbit.d ** n
        self.image = orbit.point(n)
        self.gauss_partition = Partition.gauss()
        self.partition = Partition([GAUSS_POINT, self.image])
        self.deg = orbit.degree_at_gauss(n)
        self.same = self.image == GAUSS_POINT

    @property
    def toward_image(self) -> ResiduePoint | None:
        """h_A: the direction at S_G toward S_n."""
        return self.partition.toward_second

    @property
    def toward_gauss(self) -> ResiduePoint | None:
        """a_A: the direction at S_n toward S_G."""
        return self.partition.toward_first

    def iterated(self, v: ResiduePoint):
        return self.orbit.iterated(v, self.n)

    def _containing_label(self, V) -> ResiduePoint | None:
        """Label w at S_n with V ⊂ U_w, or None when V = {S_n}."""
        if isinstance(V, VertexCell) and V.point == self.image:
            return None
        if self.same:
            return V.value
        if isinstance(V, DirectionCell) and V.base == self.image:
            return V.value
        return self.toward_gauss

    def local_degree(self, V, U) -> int:
        """m_{V,U}(f^n) for V a cell of Γ_{f^n} and U a cell of Γ_G."""
        self.partition.check_cell(V)
        self.gauss_partition.check_cell(U)
        if isinstance(U, VertexCell):
            return self.deg if V == VertexCell(self.image) else 0
        m, s, w = self.iterated(U.value)
        return s + (m if self._containing_label(V) == w else 0)

    def row_sum(self, V) -> int:
        """Σ_U m_{V,U}(f^n) over all cells U of Γ_G (finitely many are nonzero)."""
        self.partition.check_cell(V)
        total = sum(self.orbit.surplus_support(self.n).values())
        w = self._containing_label(V)
        if w is None:
            return total + self.deg
        return total + sum(self.orbit.pullback(w, self.n).values())

    def pullback(self, omega: QuantizedMeasure) -> QuantizedMeasure:
        """(f^n)^* ω as a measure on S(Γ_G)."""
        if omega.partition != self.partition:
            raise CellMismatch("measure does not live on the partition of f^n")
        total = sum(omega.masses.values(), Fraction(0))
        out = defaultdict(Fraction)
        out[VertexCell(GAUSS_POINT)] += self.deg * omega.mass(VertexCell(self.image))
        for v, s in self.orbit.surplus_support(self.n).items():
            out[DirectionCell(GAUSS_POINT, v)] += s * total
        inside = defaultdict(Fraction)
        for cell, m in omega.masses.items():
            w = self._containing_label(cell)
            if w is not None:
                inside[w] += m
        for w, mass in inside.items():
            for v, mv in self.orbit.pullback(w, self.n).items():
                out[DirectionCell(GAUSS_POINT, v)] += mv * mass
        return QuantizedMeasure(self.gauss_partition, out, self.dn * omega.leftover, check=False)

    def balance_check(self, omega: QuantizedMeasure) -> tuple[bool, Fraction]:
        lhs = self.pullback(omega).scaled(Fraction(1, self.dn))
        rhs = project_measure(omega, self.gauss_partition)
        cells = set(lhs.masses) | set(rhs.masses)
        residual = max((abs(lhs.mass(c) - rhs.mass(c)) for c in cells), default=Fraction(0))
        return residual <= omega.leftover, residual


def _iterate_for(f, n: int, orbit: Orbit | None = None) -> QuantizedIterate:
    return QuantizedIterate(orbit if orbit is not None else f, n)


def quantized_local_degree(f: RationalMapFamily, V, U, n: int = 1, orbit: Orbit | None = None) -> int:
    return _iterate_for(f, n, orbit).local_degree(V, U)


def quantized_pullback(f: RationalMapFamily, omega: QuantizedMeasure, n: int = 1,
                       orbit: Orbit | None = None) -> QuantizedMeasure:
    return _iterate_for(f, n, orbit).pullback(omega)


def quantized_balance_check(f: RationalMapFamily, omega: QuantizedMeasure, n: int = 1,
                            orbit: Orbit | None = None) -> tuple[bool, Fraction]:
    return _iterate_for(f, n, orbit).balance_check(omega)


# ---------------------------------------------------------------------
# ω_μ and μ_ω


@dataclass(frozen=True)
class AdmissiblePair:
    """(μ_C, μ_E); each ``leftover`` is read as the non-atomic mass of that measure."""

    mu_C: AtomicComplexMeasure
    mu_E: AtomicComplexMeasure


def check_admissible(pair: AdmissiblePair, Q: QuantizedIterate) -> None:
    if Q.same:
        if pair.mu_C != pair.mu_E:
            raise NotAdmissible("pullback", "μ_E must equal the pushforward of μ_C")
        return
    if pair.mu_C.mass(Q.toward_image) + pair.mu_E.mass(Q.toward_gauss) < 1:
        raise NotAdmissible("annulus", "μ_C({h_A}) + μ_E({a_A}) < 1")


def omega_from_mu(pair: AdmissiblePair, f, n: int = 1) -> QuantizedMeasure:
    Q = f if isinstance(f, QuantizedIterate) else QuantizedIterate(f, n)
    check_admissible(pair, Q)
    G, S = GAUSS_POINT, Q.image
    masses = defaultdict(Fraction)
    if Q.same:
        masses[VertexCell(G)] += pair.mu_C.leftover
        for y, m in pair.mu_C.atoms.items():
            masses[DirectionCell(G, y)] += m
        return QuantizedMeasure(Q.partition, masses)
    h, a = Q.toward_image, Q.toward_gauss
    masses[VertexCell(G)] += pair.mu_C.leftover
    masses[VertexCell(S)] += pair.mu_E.leftover
    for x, m in pair.mu_C.atoms.items():
        if x != h:
            masses[DirectionCell(G, x)] += m
    for y, m in pair.mu_E.atoms.items():
        if y != a:
            masses[DirectionCell(S, y)] += m
    masses[Q.partition.annulus()] += pair.mu_C.mass(h) + pair.mu_E.mass(a) - 1
    return QuantizedMeasure(Q.partition, masses)


def mu_from_omega(omega: QuantizedMeasure, f, n: int = 1) -> AdmissiblePair:
    Q = f if isinstance(f, QuantizedIterate) else QuantizedIterate(f, n)
    if omega.partition != Q.partition:
        raise CellMismatch("measure does not live on the partition of f^n")
    G, S = GAUSS_POINT, Q.image
    coarse_C = project_measure(omega, Partition([G]))
    atoms_C = {c.value: m for c, m in coarse_C.masses.items() if isinstance(c, DirectionCell)}
    mu_C = AtomicComplexMeasure(atoms_C, coarse_C.mass(VertexCell(G)))
    if Q.same:
        return AdmissiblePair(mu_C, mu_C)
    coarse_E = project_measure(omega, Partition([S]))
    atoms_E = {c.value: m for c, m in coarse_E.masses.items() if isinstance(c, DirectionCell)}
    mu_E = AtomicComplexMeasure(atoms_E, coarse_E.mass(VertexCell(S)))
    return AdmissiblePair(mu_C, mu_E)


def degenerate_pullback(R: ReducedMap, mu: AtomicComplexMeasure) -> AtomicComplexMeasure:
    """h̃^*μ = φ^*μ + μ(P^1)·[H = 0] for a purely atomic μ."""
    if mu.leftover:
        raise ValueError("degenerate pullback is implemented for purely atomic measures")
    out = defaultdict(Fraction)
    if R.deg_phi > 0:
        for y, m in mu.atoms.items():
            for x, k in R.phi.preimages(y):
                out[x] += k * m
    total = mu.total()
    for x, k in R.divisor():
        out[x] += k * total
    return AtomicComplexMeasure(out)


# ---------------------------------------------------------------------
# Δ_f witnesses


@dataclass
class WitnessReport:
    n: int
    s: Fraction
    s_prime: Fraction
    nu_exceptional: Fraction
    omega_n: QuantizedMeasure
    omega: QuantizedMeasure
    pullback: QuantizedMeasure
    projection: QuantizedMeasure
    pullback_equal: bool
    projection_equal: bool

    @property
    def verified(self) -> bool:
        return self.pullback_equal and self.projection_equal

    def to_json(self) -> dict:
        return {
            "n": self.n, "s": _rat(self.s), "s_prime": _rat(self.s_prime),
            "nu_exceptional": _rat(self.nu_exceptional),
            "omega_n": self.omega_n.to_json(), "omega": self.omega.to_json(),
            "pullback_equal": self.pullback_equal, "projection_equal": self.projection_equal,
        }


def witness_bound(s: Fraction, nu: Fraction) -> Fraction:
    return min(s * nu, (1 - s) * (1 - nu))


def build_witness(Q: QuantizedIterate, nu_atoms: dict, exceptional_point, nu_a: Fraction,
                  s, s_prime) -> WitnessReport:
    """Construct ω_n for (s, s′) and check both defining equalities exactly.

    ``nu_atoms`` maps direction labels at S_G to ν_f(U_v); ``exceptional_point``
    is the classical point a.
    """
    s, s_prime, nu_a = _frac(s), _frac(s_prime), _frac(nu_a)
    if not 0 <= s <= 1 or s_prime < 0 or s_prime > witness_bound(s, nu_a):
        raise BoundViolated(f"s′ = {s_prime} exceeds min(s·ν, (1−s)(1−ν)) = "
                            f"{witness_bound(s, nu_a)} for s = {s}")
    if Q.same:
        raise BoundViolated("the orbit point coincides with the Gauss point")
    G, S = GAUSS_POINT, Q.image
    a_dir_G = direction_at(G, exceptional_point).value
    a_dir_S = direction_at(S, exceptional_point).value
    if a_dir_G != Q.toward_image:
        raise BoundViolated("f^n(S_G) does not lie in the exceptional direction")
    masses = defaultdict(Fraction)
    masses[VertexCell(G)] += s_prime
    masses[VertexCell(S)] += s_prime / (1 - nu_a)
    for v, m in nu_atoms.items():
        if v != a_dir_G:
            masses[DirectionCell(G, v)] += s * m
    masses[Q.partition.annulus()] += s * nu_a - s_prime
    masses[DirectionCell(S, a_dir_S)] += 1 - s - s_prime / (1 - nu_a)
    omega_n = QuantizedMeasure(Q.partition, masses)

    target = defaultdict(Fraction)
    target[VertexCell(G)] += s_prime
    for v, m in nu_atoms.items():
        if v != a_dir_G:
            target[DirectionCell(G, v)] += s * m
    target[DirectionCell(G, a_dir_G)] += s * nu_a + (1 - s) - s_prime
    omega = QuantizedMeasure(Q.gauss_partition, target)

    pulled = Q.pullback(omega_n).scaled(Fraction(1, Q.dn))
    projected = project_measure(omega_n, Q.gauss_partition)
    return WitnessReport(Q.n, s, s_prime, nu_a, omega_n, omega, pulled, projected,
                         pulled == omega, projected == omega)


def delta_witness(f: RationalMapFamily, s, s_prime, n: int = 3, **limit_options) -> WitnessReport:
    """Witness ω_n ∈ M^1(Γ_{f^n}) for the element (s, s′) of Δ_f in case II."""
    from .limit import classify_case, limit_measure, nu_mass_exceptional_direction

    s, s_prime = _frac(s), _frac(s_prime)
    report = classify_case(f, **{k: v for k, v in limit_options.items()
                                 if k in ("window", "horizon", "candidates")})
    nu = nu_mass_exceptional_direction(f, report=report)
    if not 0 <= s <= 1 or s_prime < 0 or s_prime > witness_bound(s, nu.value):
        raise BoundViolated(f"s′ = {s_prime} exceeds min(s·ν, (1−s)(1−ν)) = "
                            f"{witness_bound(s, nu.value)} for s = {s}")
    mu = limit_measure(f, **{k: v for k, v in limit_options.items()
                             if k in ("base", "n_max", "tol")})
    if mu.leftover:
        raise BoundViolated("the projected equilibrium measure is not exactly known")
    Q = QuantizedIterate(report.orbit, n)
    return build_witness(Q, mu.atoms, report.exceptional, nu.value, s, s_prime)
