"""Text format for families and run options.

A family is written as ``;``-separated ``key = value`` statements::

    num = [0, 1*t^(-1), 1]; den = [1]
    num = [0, 0, 1]; den = [1]; degree = 2; window = 6

``num`` and ``den`` list coefficients from the constant term upward; each
entry is a series expression accepted by :func:`parse_series`.  The degree
defaults to the longer list; the remaining keys are run options.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeMismatch, ParseError
from .family import RationalMapFamily
from .series import PuiseuxSeries, parse_series

OPTION_TYPES = {
    "window": int,
    "n_max": int,
    "tol": Fraction,
    "base": str,
    "seed": int,
    "t": str,
    "samples": int,
    "burn_in": int,
    "precision": int,
}


@dataclass
class FamilySpec:
    num: tuple
    den: tuple
    degree: int
    options: dict = field(default_factory=dict)

    def family(self, validate: bool = True) -> RationalMapFamily:
        return RationalMapFamily(self.num, self.den, self.degree, validate=validate)

    def canonical(self) -> str:
        parts = [f"num = [{', '.join(c.canonical() for c in self.num)}]",
                 f"den = [{', '.join(c.canonical() for c in self.den)}]",
                 f"degree = {self.degree}"]
        for key in sorted(self.options):
            value = self.options[key]
            if isinstance(value, Fraction):
                value = f"{value.numerator}/{value.denominator}"
            parts.append(f"{key} = {value}")
        return "; ".join(parts)


def _split_top(text: str, sep: str, offset: int):
    """Split on ``sep`` outside brackets and parentheses; yields (piece, start)."""
    depth, start = 0, 0
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {ch!r}", offset + k)
        elif ch == sep and depth == 0:
            yield text[start:k], offset + start
            start = k + 1
    if depth:
        raise ParseError("unbalanced brackets", offset + len(text))
    yield text[start:], offset + start


def _parse_list(text: str, offset: int) -> list[PuiseuxSeries]:
    body = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError("expected a bracketed coefficient list", lead)
    inner = body[1:-1]
    if not inner.strip():
        raise ParseError("empty coefficient list", lead)
    out = []
    for piece, at in _split_top(inner, ",", lead + 1):
        if not piece.strip():
            raise ParseError("empty coefficient", at)
        try:
            out.append(parse_series(piece))
        except ParseError as exc:
            pos = None if exc.position is None else at + exc.position
            raise ParseError(str(exc).split(" at position")[0], pos) from None
    return out


def parse_family(text: str) -> FamilySpec:
    fields, positions = {}, {}
    for stmt, at in _split_top(text, ";", 0):
        if not stmt.strip():
            continue
        if "=" not in stmt:
            raise ParseError("expected 'key = value'", at)
        key, value = stmt.split("=", 1)
        name = key.strip().replace("-", "_")
        if name in fields:
            raise ParseError(f"duplicate key {name!r}", at)
        fields[name] = value
        positions[name] = at + len(key) + 1
    for required in ("num", "den"):
        if required not in fields:
            raise ParseError(f"missing '{required}'", len(text))
    num = _parse_list(fields.pop("num"), positions["num"])
    den = _parse_list(fields.pop("den"), positions["den"])
    natural = max(len(num), len(den)) - 1
    degree = natural
    if "degree" in fields:
        raw = fields.pop("degree").strip()
        try:
            degree = int(raw)
        except ValueError:
            raise ParseError(f"degree must be an integer, got {raw!r}", positions["degree"]) from None
        extra = [c for c in num[degree + 1:] + den[degree + 1:] if not c.is_zero()]
        if degree < 1 or extra:
            raise DegreeMismatch(f"declared degree {degree} does not fit coefficient lists of degree {natural}")
    zero = PuiseuxSeries.zero()
    num = (num + [zero] * (degree + 1))[:degree + 1]
    den = (den + [zero] * (degree + 1))[:degree + 1]
    options = {}
    for name, raw in fields.items():
        kind = OPTION_TYPES.get(name)
        if kind is None:
            raise ParseError(f"unknown key {name!r}", positions[name])
        try:
            options[name] = kind(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad value for {name!r}", positions[name]) from None
    return FamilySpec(tuple(num), tuple(den), degree, options)


def format_family(f: RationalMapFamily) -> str:
    return FamilySpec(f.num, f.den, f.degree).canonical()


def parse_point(text: str):
    """A classical point: ``inf`` or a series expression."""
    from .berkovich import CLASSICAL_INFINITY

    s = text.strip()
    if s in ("inf", "∞", "oo"):
        return CLASSICAL_INFINITY
    return parse_series(s)


def parse_t_list(text: str) -> list[complex]:
    out = []
    for piece in text.split(","):
        piece = piece.strip().replace("i", "j")
        if piece:
            out.append(complex(piece))
    if not out:
        raise ParseError("empty t list", 0)
    return out
