"""Finitely supported measures on P^1(C) with an explicit leftover mass."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .residue import ResiduePoint


def _frac(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class AtomicComplexMeasure:
    """Atoms on P^1(C) with rational masses plus a leftover (untracked or non-atomic) mass."""

    __slots__ = ("atoms", "leftover")

    def __init__(self, atoms: Mapping[ResiduePoint, object] | None = None, leftover=0):
        clean = {}
        for p, m in (atoms or {}).items():
            m = _frac(m)
            if m < 0:
                raise ValueError("negative atom mass")
            if m:
                clean[p] = clean.get(p, Fraction(0)) + m
        self.atoms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))
        self.leftover = _frac(leftover)
        if self.leftover < 0:
            raise ValueError("negative leftover mass")

    def mass(self, p: ResiduePoint) -> Fraction:
        return self.atoms.get(p, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0)) + self.leftover

    def is_purely_atomic(self) -> bool:
        return self.leftover == 0

    def __eq__(self, other):
        if not isinstance(other, AtomicComplexMeasure):
            return NotImplemented
        return self.atoms == other.atoms and self.leftover == other.leftover

    def __repr__(self):
        inner = ", ".join(f"{p}: {m}" for p, m in self.atoms.items())
        return f"AtomicComplexMeasure({{{inner}}}, leftover={self.leftover})"

    def to_json(self) -> dict:
        return {
            "atoms": [{"point": p.canonical(), "display": str(p), "mass": _rat(m)}
                      for p, m in self.atoms.items()],
            "leftover": _rat(self.leftover),
        }

    def to_csv(self) -> str:
        lines = ["re,im,mass,is_infinity"]
        for p, m in self.atoms.items():
            if p.is_infinity():
                lines.append(f",,{_rat(m)},1")
            else:
                z = p.to_complex()
                lines.append(f"{z.real!r},{z.imag!r},{_rat(m)},0")
        return "\n".join(lines) + "\n"


def _rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
