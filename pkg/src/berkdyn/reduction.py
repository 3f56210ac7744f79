"""Reduction of a family at the Gauss point: h̃ = H · φ."""

from __future__ import annotations

from dataclasses import dataclass

from .family import RationalMapFamily
from .gaussian import ONE
from .residue import Form, GPoly, ResidueMap, ResiduePoint, poly_gcd
from .series import INFINITY


@dataclass(frozen=True)
class ReducedMap:
    """Reduction of a degree-d family: the hole form H and the reduced map φ."""

    d: int
    H: Form
    phi: ResidueMap

    @property
    def deg_H(self) -> int:
        return self.H.degree

    @property
    def deg_phi(self) -> int:
        return self.phi.degree

    def divisor(self) -> list[tuple[ResiduePoint, int]]:
        return self.H.roots()

    def surplus_at(self, point: ResiduePoint) -> int:
        return self.H.order_at(point)

    def pretty(self) -> str:
        return f"H = {self.H.pretty()}; phi = {self.phi.pretty()}"

    def to_json(self) -> dict:
        return {
            "degree": self.d,
            "H": {
                "degree": self.H.degree,
                "affine_coefficients": [c.canonical() for c in self.H.poly.coeffs],
                "roots": [{"point": p.canonical(), "multiplicity": k} for p, k in self.divisor()],
            },
            "phi": {
                "degree": self.phi.degree,
                "numerator": [c.canonical() for c in self.phi.num.coeffs],
                "denominator": [c.canonical() for c in self.phi.den.coeffs],
            },
            "text": self.pretty(),
        }


def reduce_map(h: RationalMapFamily) -> ReducedMap:
    """Normalize coefficients to max norm 1, reduce, and split off the gcd H."""
    d = h.degree
    coeffs = h.num + h.den
    vmin = min(c.valuation() for c in coeffs if c.valuation_lower_bound() != INFINITY)
    num = GPoly([c.shift(-vmin).reduce() for c in h.num])
    den = GPoly([c.shift(-vmin).reduce() for c in h.den])
    if num.is_zero():
        return ReducedMap(d, Form(den.monic(), d),
                          ResidueMap(GPoly.constant(0), GPoly.constant(ONE), 0))
    if den.is_zero():
        return ReducedMap(d, Form(num.monic(), d),
                          ResidueMap(GPoly.constant(ONE), GPoly.constant(0), 0))
    g = poly_gcd(num, den)
    k = min(d - num.degree, d - den.degree)
    H = Form(g, g.degree + k)
    return ReducedMap(d, H, ResidueMap(num // g, den // g, d - H.degree))


def divisor_support(R: ReducedMap) -> list[tuple[ResiduePoint, int]]:
    return R.divisor()


def gauss_totally_invariant_test(h: RationalMapFamily) -> bool:
    """True iff h has good reduction, i.e. h⁻¹(S_G) = {S_G}."""
    return reduce_map(h).deg_H == 0
