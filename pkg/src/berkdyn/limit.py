"""Case classification, the exceptional-direction mass, and the atomic limit measure.

The limit measure is the projection of the equilibrium measure ν_f onto the
directions at the Gauss point.  It is approximated by
d^{-n} (f^n)^* δ_S for a non-exceptional classical point S: the mass of the
direction v at S_G is

    d^{-n} [ m_v(f^n) · 1{S ∈ U_{(f^n)_* v}} + s_v(f^n) ],

and only finitely many v contribute, namely the pullbacks of the direction
toward S at f^n(S_G) and the pullbacks of the hole divisors along the orbit.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .berkovich import (CLASSICAL_INFINITY, GAUSS_POINT, direction_at, hyperbolic_distance,
                        on_segment_to_classical)
from .dynamics import Orbit
from .errors import (ExceptionalBase, HypothesisViolated, NotCaseII, NotStationary,
                     Undetermined)
from .family import RationalMapFamily
from .measures import AtomicComplexMeasure, _frac, _rat
from .reduction import gauss_totally_invariant_test
from .series import PuiseuxSeries


def exceptional_fixed_check(f: RationalMapFamily, a) -> bool:
    """True iff f⁻¹(a) = {a}, i.e. f(z) − a vanishes to order d at a."""
    d = f.degree
    if a is CLASSICAL_INFINITY:
        return all(c.is_zero() for c in f.den[1:]) and not f.den[0].is_zero()
    a = PuiseuxSeries.coerce(a)
    F = [p - q * a for p, q in zip(f.num, f.den)]
    if F[d].is_zero():
        return False
    # synthetic division by (z − a), d times, must leave zero remainders
    for _ in range(d):
        acc = PuiseuxSeries.zero()
        quotient = []
        for c in reversed(F):
            acc = acc * a + c
            quotient.append(acc)
        if not quotient[-1].is_zero():
            return False
        F = list(reversed(quotient[:-1]))
    return True


def is_exceptional(f: RationalMapFamily, a) -> bool:
    """a lies in a totally invariant cycle of length one or two."""
    return exceptional_fixed_check(f, a) or exceptional_fixed_check(f.compose(f), a)


@dataclass
class CaseReport:
    case: str
    exceptional: object
    window: int
    horizon: int
    degrees: list
    radius_exponents: list
    on_segment: list
    escaping: list
    gauss_ratio: Fraction
    orbit: Orbit = field(repr=False)

    def to_json(self) -> dict:
        a = self.exceptional
        return {
            "case": self.case,
            "exceptional": None if a is None else ("inf" if a is CLASSICAL_INFINITY else a.canonical()),
            "window": self.window,
            "horizon": self.horizon,
            "degrees": self.degrees,
            "radius_exponents": [_rat(q) for q in self.radius_exponents],
            "on_segment": self.on_segment,
            "escaping": self.escaping,
            "gauss_degree_ratio": _rat(self.gauss_ratio),
        }


def classify_case(f: RationalMapFamily, window: int = 4, horizon: int | None = None,
                  candidates=(), case_one_tol=Fraction(1, 1000)) -> CaseReport:
    """Semi-decide which alternative of the classification holds.

    Case II is reported when the last ``window`` orbit steps all have local
    degree d and move strictly away from S_G along [S_G, a] for an exceptional
    candidate a; case I when deg_{S_G}(f^n)/d^n has dropped below
    ``case_one_tol``; otherwise Undetermined.
    """
    if gauss_totally_invariant_test(f):
        raise HypothesisViolated("f has good reduction: f⁻¹(S_G) = {S_G}")
    horizon = horizon if horizon is not None else max(3 * window, 8)
    orbit = Orbit(f, horizon)
    d = f.degree
    degrees = [orbit.step(j).local_degree for j in range(horizon + 1)]
    points = [orbit.point(j) for j in range(horizon + 2)]
    ratio = Fraction(orbit.degree_at_gauss(horizon + 1), d ** (horizon + 1))
    cands = [CLASSICAL_INFINITY, PuiseuxSeries.zero()] + [PuiseuxSeries.coerce(c) for c in candidates]
    exceptional = [a for a in cands if exceptional_fixed_check(f, a)]
    tail = range(horizon + 1 - window, horizon + 1)
    escaping = [hyperbolic_distance(GAUSS_POINT, points[j + 1]) >
                hyperbolic_distance(GAUSS_POINT, points[j]) for j in range(horizon + 1)]
    chosen, flags = None, []
    for a in exceptional:
        flags = [on_segment_to_classical(points[j], GAUSS_POINT, a) for j in range(horizon + 2)]
        if all(degrees[j] == d and escaping[j] and flags[j] and flags[j + 1] for j in tail):
            chosen = a
            break
    if chosen is None and exceptional:
        flags = [on_segment_to_classical(p, GAUSS_POINT, exceptional[0]) for p in points]
    if chosen is not None:
        case = "II"
    elif ratio <= case_one_tol:
        case = "I"
    else:
        case = "Undetermined"
    return CaseReport(case, chosen, window, horizon, degrees,
                      [p.q for p in points], flags, escaping, ratio, orbit)


@dataclass
class NuReport:
    value: Fraction
    onset: int
    identically: bool
    ratios: list

    def to_json(self) -> dict:
        return {"nu": _rat(self.value), "onset": self.onset,
                "identically_full_degree": self.identically,
                "ratios": [_rat(r) for r in self.ratios]}


def nu_mass_exceptional_direction(f: RationalMapFamily, window: int = 4, horizon: int | None = None,
                                  candidates=(), report: CaseReport | None = None) -> NuReport:
    """ν_f(U_{→S_G a}) = 1 − deg_{S_G}(f^{n0})/d^{n0} from the stationarity onset n0."""
    if report is None:
        report = classify_case(f, window, horizon, candidates)
    if report.case != "II":
        raise NotCaseII(f"classification is {report.case}")
    d = f.degree
    orbit = report.orbit
    last = report.horizon + 1
    ratios = [Fraction(orbit.degree_at_gauss(n), d ** n) for n in range(last + 1)]
    n0 = last
    while n0 > 0 and ratios[n0 - 1] == ratios[last]:
        n0 -= 1
    if last - n0 < report.window:
        raise NotStationary("deg_{S_G}(f^n)/d^n has not stabilized within the window")
    identically = all(x == d for x in report.degrees)
    return NuReport(1 - ratios[n0], n0, identically, ratios)


class LimitMeasure(AtomicComplexMeasure):
    """Atomic limit measure with the per-n history of the approximation."""

    __slots__ = ("n_used", "history", "base")

    def to_json(self) -> dict:
        out = super().to_json()
        out["n"] = self.n_used
        out["history"] = [{"n": n, "atoms": {p.canonical(): _rat(m) for p, m in a.items()},
                           "leftover": _rat(l)} for n, a, l in self.history]
        return out


def _capped_pullback(orbit: Orbit, value, n: int, max_atoms: int, max_degree: int):
    """Pullback of a label at S_n to S_G; labels beyond the caps are dropped.

    Returns ({v: m_v(f^n)}, total multiplicity dropped).
    """
    # a label at S_j with multiplicity m accounts for m·deg_{S_G}(f^j) at S_G
    level = {value: 1}
    dropped = 0
    for j in range(n - 1, -1, -1):
        weight = orbit.degree_at_gauss(j)
        nxt = defaultdict(int)
        for w, mult in level.items():
            for v, k in orbit.preimages(j, w):
                if v.kind == "alg" and v.minpoly.degree > max_degree:
                    dropped += mult * k * weight
                else:
                    nxt[v] += mult * k
        if len(nxt) > max_atoms:
            ranked = sorted(nxt.items(), key=lambda kv: (-kv[1], kv[0].sort_key()))
            dropped += sum(m for _, m in ranked[max_atoms:]) * weight
            nxt = dict(ranked[:max_atoms])
        level = dict(nxt)
    return level, dropped


def limit_measure(f: RationalMapFamily, base=2, n_max: int = 8, tol=0,
                  max_atoms: int = 256, max_degree: int = 12, stable_steps: int = 1) -> LimitMeasure:
    """Approximate the projection of ν_f to the directions at S_G.

    Iterates n = 1, 2, ... until the measure changes by at most ``tol`` in
    total variation for ``stable_steps`` consecutive steps, or n = n_max.
    """
    if gauss_totally_invariant_test(f):
        raise HypothesisViolated("f has good reduction: f⁻¹(S_G) = {S_G}")
    base = base if base is CLASSICAL_INFINITY else PuiseuxSeries.coerce(base)
    if is_exceptional(f, base):
        raise ExceptionalBase("the base point is exceptional")
    tol = _frac(tol)
    d = f.degree
    orbit = Orbit(f, n_max)
    history = []
    previous = None
    stable = 0
    atoms, leftover, n = {}, Fraction(0), 0
    for n in range(1, n_max + 1):
        dn = d ** n
        w = direction_at(orbit.point(n), base).value
        m_part, dropped = _capped_pullback(orbit, w, n, max_atoms, max_degree)
        s_part = orbit.surplus_support(n)
        acc = defaultdict(int)
        for v, m in m_part.items():
            acc[v] += m
        for v, s in s_part.items():
            acc[v] += s
        atoms = {v: Fraction(c, dn) for v, c in acc.items() if c}
        tracked = sum(atoms.values(), Fraction(0))
        leftover = 1 - tracked
        if leftover < 0 or leftover != Fraction(dropped, dn):
            raise AssertionError("mass conservation failed in the limit computation")
        history.append((n, dict(atoms), leftover))
        if previous is not None:
            keys = set(atoms) | set(previous[0])
            change = sum((abs(atoms.get(k, 0) - previous[0].get(k, 0)) for k in keys), Fraction(0))
            change += abs(leftover - previous[1])
            stable = stable + 1 if change <= tol else 0
            if stable >= stable_steps:
                break
        previous = (atoms, leftover)
    out = LimitMeasure(atoms, leftover)
    out.n_used = n
    out.history = history
    out.base = base
    return out


@dataclass
class DeltaDescription:
    case: str
    nu: Fraction | None
    proper_inclusion: bool
    exceptional: object
    limit: AtomicComplexMeasure | None
    text: str

    def to_json(self) -> dict:
        a = self.exceptional
        return {
            "case": self.case,
            "nu_exceptional": None if self.nu is None else _rat(self.nu),
            "dagger_properly_contained": self.proper_inclusion,
            "exceptional": None if a is None else ("inf" if a is CLASSICAL_INFINITY else a.canonical()),
            "projection_of_equilibrium": None if self.limit is None else self.limit.to_json(),
            "description": self.text,
        }


def delta_f_description(f: RationalMapFamily, window: int = 4, horizon: int | None = None,
                        candidates=(), base=2, n_max: int = 8) -> DeltaDescription:
    report = classify_case(f, window, horizon, candidates)
    if report.case == "Undetermined":
        raise Undetermined("classification is undetermined within the horizon")
    mu = limit_measure(f, base=base, n_max=n_max)
    if report.case == "I":
        return DeltaDescription("I", None, False, None, mu,
                                "Δ_f = Δ_f^† = {projection of ν_f}")
    nu = nu_mass_exceptional_direction(f, report=report).value
    text = (f"Δ_f = {{ω : ω(U_v) = s·ν_f(U_v) for v ≠ →S_G a, ω({{S_G}}) = s′, "
            f"ω(U_{{→S_G a}}) = s·{nu} + (1 − s) − s′; 0 ≤ s ≤ 1, "
            f"0 ≤ s′ ≤ min(s·{nu}, (1 − s)·{1 - nu})}}; "
            f"Δ_f^† = projections of s·ν_f + (1 − s)·δ_a; "
            + ("Δ_f^† ⊊ Δ_f" if nu > 0 else "Δ_f^† = Δ_f"))
    return DeltaDescription("II", nu, nu > 0, report.exceptional, mu, text)
