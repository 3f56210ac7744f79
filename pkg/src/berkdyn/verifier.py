"""Complex specializations f_t and backward-orbit sampling of their
maximal-entropy measures, compared against the predicted atomic limit.

Points of the Riemann sphere are stored as unit vectors (X, Y) in C^2, so
infinity needs no special casing.  Distances use the chordal metric
|X1·Y2 − X2·Y1| between unit representatives, which takes values in [0, 1].
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AtomsTooClose, DegreeDropped, RootSolveFailure
from .family import RationalMapFamily
from .measures import AtomicComplexMeasure, _rat

CHUNK = 8192


@dataclass(frozen=True)
class ComplexMapInstance:
    """g(z) = Σ p_k z^k / Σ q_k z^k with complex coefficients, low to high."""

    degree: int
    num: tuple
    den: tuple
    t0: complex | None = None

    @classmethod
    def from_coefficients(cls, num, den, degree: int | None = None) -> ComplexMapInstance:
        degree = degree if degree is not None else max(len(num), len(den)) - 1
        num = tuple(complex(c) for c in num) + (0j,) * (degree + 1 - len(num))
        den = tuple(complex(c) for c in den) + (0j,) * (degree + 1 - len(den))
        g = cls(degree, num, den)
        _check_conditioning(g)
        return g

    def __call__(self, z: complex) -> complex:
        P = sum(c * z ** k for k, c in enumerate(self.num))
        Q = sum(c * z ** k for k, c in enumerate(self.den))
        return complex("inf") if Q == 0 else P / Q

    def pretty(self) -> str:
        def poly(cs):
            parts = [f"({c:.6g})*z^{k}" for k, c in enumerate(cs) if c != 0]
            return " + ".join(reversed(parts)) or "0"
        return f"({poly(self.num)})/({poly(self.den)})"


def _sylvester_resultant(p, q, d) -> complex:
    """Homogeneous resultant of two binary forms of degree d, coefficients low to high."""
    n = 2 * d
    S = np.zeros((n, n), dtype=complex)
    for i in range(d):
        S[i, i:i + d + 1] = p[::-1]
        S[d + i, i:i + d + 1] = q[::-1]
    return complex(np.linalg.det(S))


def _check_conditioning(g: ComplexMapInstance) -> None:
    scale = max(abs(c) for c in g.num + g.den)
    if scale == 0 or not math.isfinite(scale):
        raise DegreeDropped("coefficients vanish or overflow")
    p = np.array(g.num) / scale
    q = np.array(g.den) / scale
    res = _sylvester_resultant(p, q, g.degree)
    if not np.isfinite(res) or abs(res) < 1e-250:
        raise DegreeDropped(f"numeric resultant {abs(res):.3g} is not bounded away from zero")


def specialize(f: RationalMapFamily, t0: complex) -> ComplexMapInstance:
    """Evaluate every coefficient of f at t0 (principal branch for fractional powers)."""
    t0 = complex(t0)
    if not 0 < abs(t0) < 1:
        raise ValueError("specialization needs 0 < |t0| < 1")
    num = tuple(c.evaluate(t0) for c in f.num)
    den = tuple(c.evaluate(t0) for c in f.den)
    g = ComplexMapInstance(f.degree, num, den, t0)
    _check_conditioning(g)
    return g


# ---------------------------------------------------------------------
# sphere helpers

def to_homogeneous(z) -> np.ndarray:
    """Unit representatives of points given as complex numbers (inf allowed)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape + (2,), dtype=complex)
    inf = ~np.isfinite(z)
    zz = np.where(inf, 0, z)
    big = np.abs(zz) > 1
    safe = np.where(big, zz, 1)
    out[..., 0] = np.where(inf, 1, np.where(big, 1, zz))
    out[..., 1] = np.where(inf, 0, np.where(big, 1 / safe, 1))
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def chordal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])


def _quadratic_roots(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Roots of x² + b x + c without cancellation."""
    s = np.sqrt(b * b - 4 * c)
    s = np.where((b.conj() * s).real < 0, -s, s)
    q = -(b + s) / 2
    nz = q != 0
    other = np.where(nz, c / np.where(nz, q, 1), 0)
    return np.stack([q, other], axis=1)


def _roots(c: np.ndarray) -> np.ndarray:
    """Roots of the binary forms Σ c_k X^k Y^{d−k}, one row per form, as unit vectors."""
    n, dp1 = c.shape
    d = dp1 - 1
    forward = np.abs(c[:, d]) >= np.abs(c[:, 0])
    lead = np.where(forward, c[:, d], c[:, 0])
    # monic coefficients a_0..a_{d−1} in the chosen chart
    low = np.where(forward[:, None], c[:, :d], c[:, :0:-1]) / lead[:, None]
    if d == 2:
        r = _quadratic_roots(low[:, 1], low[:, 0])
    else:
        comp = np.zeros((n, d, d), dtype=complex)
        comp[:, 0, :] = -low[:, ::-1]
        idx = np.arange(d - 1)
        comp[:, idx + 1, idx] = 1
        r = np.linalg.eigvals(comp)
    out = np.empty((n, d, 2), dtype=complex)
    out[..., 0] = np.where(forward[:, None], r, 1)
    out[..., 1] = np.where(forward[:, None], 1, r)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def _roots_fallback(row: np.ndarray) -> np.ndarray:
    d = len(row) - 1
    for forward in (True, False):
        coeffs = row[::-1] if forward else row
        lead = np.flatnonzero(coeffs)
        if not len(lead):
            break
        r = np.roots(coeffs[lead[0]:])
        r = np.concatenate([r, np.full(lead[0], np.inf)]) if forward else \
            np.concatenate([1 / r, np.zeros(lead[0])])
        if len(r) == d and np.all(np.isfinite(r) | np.isinf(r)):
            return to_homogeneous(r)
    raise RootSolveFailure("backward step could not be solved")


def backward_step(g: ComplexMapInstance, points: np.ndarray, choice: np.ndarray) -> np.ndarray:
    """Replace each point w by its preimage number choice[i] (with multiplicity)."""
    p = np.array(g.num)
    q = np.array(g.den)
    c = points[:, 1:2] * p[None, :] - points[:, 0:1] * q[None, :]
    roots = _roots(c)
    if roots.shape[1] != g.degree:
        raise AssertionError("root multiset has the wrong cardinality")
    bad = ~np.all(np.isfinite(roots), axis=(1, 2))
    for i in np.flatnonzero(bad):
        roots[i] = _roots_fallback(c[i])
    return roots[np.arange(len(points)), choice]


@dataclass
class EmpiricalMeasure:
    samples: np.ndarray = field(repr=False)
    count: int
    seed: int
    burn_in: int

    def points(self) -> np.ndarray:
        """Samples as complex numbers, with inf for the point at infinity."""
        X, Y = self.samples[:, 0], self.samples[:, 1]
        safe = np.where(Y == 0, 1, Y)
        return np.where(Y == 0, complex("inf"), X / safe)

    def mass_near(self, point, eps: float) -> float:
        target = to_homogeneous(point)[0]
        return float(np.mean(chordal(self.samples, target[None, :]) < eps))

    def to_csv(self) -> str:
        lines = ["re,im,is_infinity"]
        for z in self.points():
            if np.isfinite(z):
                lines.append(f"{z.real!r},{z.imag!r},0")
            else:
                lines.append(",,1")
        return "\n".join(lines) + "\n"


def backward_orbit_measure(g: ComplexMapInstance, n_samples: int, burn_in: int = 40, seed: int = 0,
                           start: complex = 0.5, workers: int | None = None) -> EmpiricalMeasure:
    """One sample per chain: burn_in uniform backward steps from ``start``.

    Chains are grouped in fixed-size chunks, each with its own spawned seed, so
    the sample multiset does not depend on the number of worker threads.
    """
    if g.degree < 2:
        raise ValueError("backward sampling needs degree at least 2")
    chunks = [(i, min(CHUNK, n_samples - i)) for i in range(0, n_samples, CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(chunks))
    z0 = to_homogeneous(start)[0]

    def run(k):
        _, size = chunks[k]
        rng = np.random.default_rng(seeds[k])
        pts = np.repeat(z0[None, :], size, axis=0)
        for _ in range(burn_in):
            pts = backward_step(g, pts, rng.integers(0, g.degree, size=size))
        return pts

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(chunks))))
    else:
        parts = [run(k) for k in range(len(chunks))]
    samples = np.concatenate(parts) if parts else np.empty((0, 2), dtype=complex)
    return EmpiricalMeasure(samples, n_samples, seed, burn_in)


@dataclass
class ComparisonReport:
    eps: float
    rows: list
    unassigned: float
    leftover: float
    max_deviation: float

    def to_json(self) -> dict:
        return {"eps": self.eps, "atoms": self.rows, "unassigned": self.unassigned,
                "predicted_leftover": self.leftover, "max_deviation": self.max_deviation}


def compare_measures(emp: EmpiricalMeasure, predicted: AtomicComplexMeasure, eps: float = 0.05) -> ComparisonReport:
    pts = list(predicted.atoms)
    centers = to_homogeneous([p.to_complex() for p in pts]) if pts else np.empty((0, 2))
    for i in range(len(pts)):
        for j in range(i):
            if chordal(centers[i], centers[j]) <= 2 * eps:
                raise AtomsTooClose(f"atoms {pts[j]} and {pts[i]} are within 2·eps")
    rows, assigned, worst = [], 0.0, 0.0
    for p, c in zip(pts, centers):
        m = float(np.mean(chordal(emp.samples, c[None, :]) < eps)) if emp.count else 0.0
        pm = predicted.atoms[p]
        dev = abs(m - float(pm))
        worst = max(worst, dev)
        assigned += m
        rows.append({"point": p.canonical(), "display": str(p), "predicted": _rat(pm),
                     "empirical": m, "deviation": dev})
    return ComparisonReport(eps, rows, 1.0 - assigned, float(predicted.leftover), worst)


@dataclass
class StudyTable:
    rows: list
    seed: int
    n_samples: int
    burn_in: int
    eps: float

    @property
    def final_deviation(self) -> float:
        return self.rows[-1]["max_deviation"]

    def passes(self, tol: float = 0.02) -> bool:
        return bool(self.rows) and self.final_deviation <= tol

    def monotone(self) -> bool:
        devs = [r["max_deviation"] for r in self.rows]
        return all(a >= b for a, b in zip(devs, devs[1:]))

    def to_json(self) -> dict:
        return {"seed": self.seed, "samples": self.n_samples, "burn_in": self.burn_in,
                "eps": self.eps, "rows": self.rows, "monotone": self.monotone()}


def convergence_study(f: RationalMapFamily, t_list, n_samples: int = 200_000, burn_in: int = 40,
                      seed: int = 0, eps: float = 0.05, predicted: AtomicComplexMeasure | None = None,
                      workers: int | None = None) -> StudyTable:
    """Deviation of the sampled μ_{f_t} from the predicted atoms for each t."""
    t_list = [complex(t) for t in t_list]
    mods = [abs(t) for t in t_list]
    if any(later >= earlier for later, earlier in zip(mods[1:], mods)):
        raise ValueError("t values must decrease strictly in modulus")
    if predicted is None:
        from .limit import limit_measure
        predicted = limit_measure(f)
    rows = []
    for t in t_list:
        g = specialize(f, t)
        emp = backward_orbit_measure(g, n_samples, burn_in, seed, workers=workers)
        rep = compare_measures(emp, predicted, eps)
        rows.append({"t": f"{t.real!r}" if t.imag == 0 else repr(t),
                     "max_deviation": rep.max_deviation,
                     "unassigned": rep.unassigned,
                     "atoms": rep.rows})
    return StudyTable(rows, seed, n_samples, burn_in, eps)
