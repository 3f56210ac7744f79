"""Random families and directions shared by the property tests and the acceptance suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from berkdyn.errors import InvalidFamily
from berkdyn.family import RationalMapFamily
from berkdyn.gaussian import GaussianRational
from berkdyn.residue import INFINITY_POINT, ResiduePoint
from berkdyn.series import PuiseuxSeries


def random_coefficient(rng: random.Random, lo: int = -3, hi: int = 3, density: float = 0.7) -> PuiseuxSeries:
    if rng.random() > density:
        return PuiseuxSeries.zero()
    terms = {}
    for _ in range(rng.randint(1, 2)):
        c = GaussianRational(rng.randint(-3, 3), rng.choice([0, 0, rng.randint(-2, 2)]))
        if c:
            terms[Fraction(rng.randint(lo, hi))] = c
    return PuiseuxSeries(terms) if terms else PuiseuxSeries.one()


def random_family(rng: random.Random, degrees=(2, 3, 4), lo: int = -3, hi: int = 3) -> RationalMapFamily:
    """A valid family of random degree with Laurent coefficients, exponents in [lo, hi]."""
    while True:
        d = rng.choice(degrees)
        num = [random_coefficient(rng, lo, hi) for _ in range(d + 1)]
        den = [random_coefficient(rng, lo, hi) for _ in range(d + 1)]
        if rng.random() < 0.3:
            # polynomial families
            den = [random_coefficient(rng, lo, hi, density=1.0)] + [PuiseuxSeries.zero()] * d
        if num[d].is_zero() and den[d].is_zero():
            num[d] = PuiseuxSeries.one()
        try:
            return RationalMapFamily(num, den, d)
        except InvalidFamily:
            continue


def random_direction(rng: random.Random, extra=()) -> ResiduePoint:
    """∞, a small Gaussian rational, or one of ``extra``."""
    pool = list(extra)
    r = rng.random()
    if pool and r < 0.4:
        return rng.choice(pool)
    if r < 0.5:
        return INFINITY_POINT
    return ResiduePoint.exact(GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                                               rng.choice([0, 0, rng.randint(-2, 2)])))


@st.composite
def families(draw, degrees=(2, 3, 4)):
    return random_family(random.Random(draw(st.integers(0, 2**32 - 1))), degrees)


@st.composite
def directions(draw):
    return random_direction(random.Random(draw(st.integers(0, 2**32 - 1))))


def laurent_series(max_terms: int = 4, lo: int = -3, hi: int = 3, denominators=(1, 2)):
    """Exact Puiseux series with few terms and small exponents."""
    coeff = st.builds(GaussianRational, st.integers(-5, 5), st.integers(-5, 5))
    exps = st.builds(Fraction, st.integers(lo * 2, hi * 2), st.sampled_from(denominators))
    return st.dictionaries(exps, coeff, max_size=max_terms).map(PuiseuxSeries)
