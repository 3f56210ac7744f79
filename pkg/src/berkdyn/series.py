"""Puiseux series over Q(i) with optional truncation precision.

A :class:`PuiseuxSeries` is a finite sum of terms ``c * t^e`` with ``c`` a
Gaussian rational and ``e`` a rational exponent, optionally followed by an
error term ``O(t^N)``.  Exact elements (no error term) form a ring that is
closed under the operations used throughout the package; division by a
non-monomial introduces a precision bound.

Valuations are exponents: the norm of ``x`` is ``r**valuation(x)`` for a
fixed ``0 < r < 1`` that never needs a numerical value.
"""

from __future__ import annotations

import cmath
import contextlib
import math
import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .errors import InsufficientPrecision, NotIntegral, ParseError, SeriesDivisionByZero
from .gaussian import ONE, ZERO, GaussianRational, frac_text

INFINITY = math.inf

_working_precision = [Fraction(64)]


def working_precision() -> Fraction:
    """Relative precision (in exponent units past the leading term) used by division."""
    return _working_precision[0]


def set_working_precision(w) -> None:
    w = Fraction(w)
    if w <= 0:
        raise ValueError("working precision must be positive")
    _working_precision[0] = w


@contextlib.contextmanager
def precision_context(w):
    old = _working_precision[0]
    set_working_precision(w)
    try:
        yield
    finally:
        _working_precision[0] = old


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    """Immutable truncated Puiseux series ``sum c_e t^e + O(t^N)``."""

    __slots__ = ("_terms", "precision", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), precision=None):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        prec = None if precision is None else Fraction(precision)
        clean = {}
        for e, c in items:
            e = e if type(e) is Fraction else Fraction(e)
            c = GaussianRational.coerce(c)
            if not c:
                continue
            if prec is not None and e >= prec:
                continue
            if e in clean:
                c = clean[e] + c
                if not c:
                    del clean[e]
                    continue
            clean[e] = c
        self._terms = tuple(sorted(clean.items(), key=lambda kv: kv[0]))
        self.precision = prec
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple, precision):
        """Build from already-normalized sorted terms (internal fast path)."""
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.precision = precision
        obj._hash = None
        return obj

    @classmethod
    def _from_dict(cls, d: dict, precision=None):
        if precision is None:
            items = [(e, c) for e, c in d.items() if c]
        else:
            items = [(e, c) for e, c in d.items() if c and e < precision]
        items.sort(key=lambda kv: kv[0])
        return cls._raw(tuple(items), precision)

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> PuiseuxSeries:
        return _ZERO_SERIES

    @classmethod
    def one(cls) -> PuiseuxSeries:
        return _ONE_SERIES

    @classmethod
    def constant(cls, c) -> PuiseuxSeries:
        c = GaussianRational.coerce(c)
        return cls._raw(((Fraction(0), c),) if c else (), None)

    @classmethod
    def monomial(cls, c, e) -> PuiseuxSeries:
        c = GaussianRational.coerce(c)
        return cls._raw(((Fraction(e), c),) if c else (), None)

    @classmethod
    def coerce(cls, x) -> PuiseuxSeries:
        if isinstance(x, PuiseuxSeries):
            return x
        return cls.constant(x)

    # basic queries ----------------------------------------------------
    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def ramification(self) -> int:
        m = 1
        for e, _ in self._terms:
            m = lcm(m, e.denominator)
        if self.precision is not None:
            m = lcm(m, self.precision.denominator)
        return m

    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        """True only for the exact zero element."""
        return not self._terms and self.precision is None

    def is_monomial(self) -> bool:
        return self.precision is None and len(self._terms) == 1

    def valuation(self):
        """Least exponent with nonzero coefficient; ``math.inf`` for exact zero."""
        if self._terms:
            return self._terms[0][0]
        if self.precision is None:
            return INFINITY
        raise InsufficientPrecision(
            f"element is indistinguishable from zero below t^{self.precision}")

    def valuation_lower_bound(self):
        if self._terms:
            return self._terms[0][0]
        return INFINITY if self.precision is None else self.precision

    def leading_coefficient(self) -> GaussianRational:
        self.valuation()
        return self._terms[0][1] if self._terms else ZERO

    def coefficient(self, e) -> GaussianRational:
        e = Fraction(e)
        if self.precision is not None and e >= self.precision:
            raise InsufficientPrecision(f"coefficient of t^{e} is beyond the precision")
        for ex, c in self._terms:
            if ex == e:
                return c
            if ex > e:
                break
        return ZERO

    def reduce(self) -> GaussianRational:
        """Residue class of an integral element (the coefficient of t^0)."""
        if self._terms and self._terms[0][0] < 0:
            raise NotIntegral(f"valuation {self._terms[0][0]} < 0")
        return self.coefficient(0)

    def truncate(self, q) -> PuiseuxSeries:
        """Exact element made of the terms with exponent < q."""
        q = Fraction(q)
        if self.precision is not None and self.precision < q:
            raise InsufficientPrecision(
                f"need terms below t^{q} but precision is t^{self.precision}")
        return PuiseuxSeries._raw(tuple(kv for kv in self._terms if kv[0] < q), None)

    def with_precision(self, n) -> PuiseuxSeries:
        n = Fraction(n)
        return PuiseuxSeries._raw(tuple(kv for kv in self._terms if kv[0] < n),
                                  _min_prec(self.precision, n))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.constant(other)
            except TypeError:
                return NotImplemented
        if not other._terms and other.precision is None:
            return self
        if not self._terms and self.precision is None:
            return other
        d = dict(self._terms)
        for e, c in other._terms:
            if e in d:
                d[e] = d[e] + c
            else:
                d[e] = c
        return PuiseuxSeries._from_dict(d, _min_prec(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self._terms), self.precision)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.constant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                c = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        if self.precision is None and other.precision is None:
            if not self._terms or not other._terms:
                return _ZERO_SERIES
            if len(other._terms) == 1:
                e0, c0 = other._terms[0]
                return PuiseuxSeries._raw(
                    tuple((e + e0, c * c0) for e, c in self._terms), None)
            if len(self._terms) == 1:
                return other * self
            prec = None
        else:
            lv_s = self.valuation_lower_bound()
            lv_o = other.valuation_lower_bound()
            cand = []
            if self.precision is not None:
                cand.append(self.precision + lv_o)
            if other.precision is not None:
                cand.append(other.precision + lv_s)
            prec = min(cand)
            if prec == INFINITY:
                return _ZERO_SERIES
        d = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                p = c1 * c2
                if e in d:
                    d[e] = d[e] + p
                else:
                    d[e] = p
        return PuiseuxSeries._from_dict(d, prec)

    __rmul__ = __mul__

    def scale(self, c) -> PuiseuxSeries:
        c = GaussianRational.coerce(c)
        if not c:
            return PuiseuxSeries._raw((), self.precision)
        return PuiseuxSeries._raw(tuple((e, x * c) for e, x in self._terms), self.precision)

    def shift(self, e) -> PuiseuxSeries:
        """Multiply by t^e (exact)."""
        e = Fraction(e)
        prec = None if self.precision is None else self.precision + e
        return PuiseuxSeries._raw(tuple((x + e, c) for x, c in self._terms), prec)

    def __pow__(self, n: int):
        if n < 0:
            return divide(PuiseuxSeries.one(), self ** (-n))
        result, base = _ONE_SERIES, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self, rel_precision=None) -> PuiseuxSeries:
        return divide(_ONE_SERIES, self, rel_precision=rel_precision)

    def __truediv__(self, other):
        return divide(self, PuiseuxSeries.coerce(other))

    def __rtruediv__(self, other):
        return divide(PuiseuxSeries.coerce(other), self)

    # comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms and self.precision == other.precision

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._terms, self.precision))
        return self._hash

    def sort_key(self):
        return (tuple((e, c.re, c.im) for e, c in self._terms),
                self.precision is not None, self.precision or 0)

    # evaluation -------------------------------------------------------
    def evaluate(self, t0: complex) -> complex:
        """Numerical value at ``t0`` using the principal branch of t^e."""
        t0 = complex(t0)
        if t0 == 0:
            raise ValueError("cannot evaluate at t = 0")
        log_t = cmath.log(t0)
        total = 0j
        for e, c in self._terms:
            total += c.to_complex() * cmath.exp(float(e) * log_t)
        return total

    # text ------------------------------------------------------------
    def canonical(self) -> str:
        """Canonical text, e.g. ``(1/1+0/1i)*t^(-1/1) + O(t^(3/1))``."""
        parts = [f"({c.canonical()})*t^({frac_text(e)})" for e, c in self._terms]
        if self.precision is not None:
            parts.append(f"O(t^({frac_text(self.precision)}))")
        return " + ".join(parts) if parts else "0"

    def pretty(self) -> str:
        """Short human-readable text."""
        parts = []
        for e, c in self._terms:
            if e == 0:
                parts.append(str(c))
                continue
            cs = "" if c == 1 else "-" if c == -1 else (
                f"({c})" if c.im and c.re else f"{c}")
            te = "t" if e == 1 else f"t^{e}" if e.denominator == 1 and e > 0 else f"t^({e})"
            parts.append(f"{cs}{'*' if cs not in ('', '-') else ''}{te}")
        if self.precision is not None:
            parts.append(f"O(t^({self.precision}))")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.pretty()

    def __repr__(self):
        return f"PuiseuxSeries({self.canonical()!r})"

    @classmethod
    def parse(cls, text: str) -> PuiseuxSeries:
        return parse_series(text)


_ZERO_SERIES = PuiseuxSeries._raw((), None)
_ONE_SERIES = PuiseuxSeries._raw(((Fraction(0), ONE),), None)


def valuation(x: PuiseuxSeries):
    return x.valuation()


def reduce_scalar(x: PuiseuxSeries) -> GaussianRational:
    return x.reduce()


def t_power(e) -> PuiseuxSeries:
    return PuiseuxSeries.monomial(ONE, e)


def divide(x: PuiseuxSeries, y: PuiseuxSeries, precision=None, rel_precision=None) -> PuiseuxSeries:
    """Quotient ``x / y``.

    Exact when ``y`` is an exact monomial and ``x`` is exact.  Otherwise
    the result carries the absolute precision ``precision`` if given, else
    ``valuation(x) - valuation(y) + rel_precision`` (default: the working
    precision), further limited by the precision of the inputs.
    """
    if y.is_zero():
        raise SeriesDivisionByZero("division by the zero series")
    vy = y.valuation()
    cy = y._terms[0][1]
    if y.is_monomial():
        inv = PuiseuxSeries._raw(((-vy, cy.inverse()),), None)
        return x * inv
    if x.is_zero():
        return _ZERO_SERIES
    lx = x.valuation_lower_bound()
    if precision is not None:
        rel = Fraction(precision) - lx + vy
    else:
        rel = Fraction(rel_precision) if rel_precision is not None else working_precision()
    if rel <= 0:
        return PuiseuxSeries._raw((), lx - vy + max(rel, Fraction(0)))
    if y.precision is not None:
        rel = min(rel, y.precision - vy)
    m = lcm(y.ramification, x.ramification)
    steps = math.ceil(rel * m)
    cinv = cy.inverse()
    # u = y / (c t^vy) = 1 + sum a_k s^k with s = t^(1/m)
    a = []
    for e, c in y._terms[1:]:
        k = (e - vy) * m
        a.append((int(k), c * cinv))
    b = [ONE] + [ZERO] * (steps - 1)
    for n in range(1, steps):
        acc = ZERO
        for k, ak in a:
            if k > n:
                break
            bk = b[n - k]
            if bk:
                acc = acc + ak * bk
        b[n] = -acc
    inv_terms = {}
    for n, bn in enumerate(b):
        if bn:
            inv_terms[Fraction(n, m) - vy] = bn * cinv
    inv = PuiseuxSeries._from_dict(inv_terms, -vy + Fraction(steps, m))
    return x * inv


# ---------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?i?)|(?P<i>i)|(?P<t>t)|(?P<O>O)|(?P<op>[-+*^()/]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _SeriesParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", tok[2])
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> PuiseuxSeries:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return value

    def expr(self) -> PuiseuxSeries:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> PuiseuxSeries:
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = value * self.factor()
        return value

    def exponent(self) -> Fraction:
        tok = self.peek()
        if tok[1] == "(":
            self.take()
            sign = 1
            if self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            num = self.take(kind="num")
            if num[1].endswith("i"):
                raise ParseError("imaginary exponent", num[2])
            self.take(")")
            return sign * Fraction(num[1])
        sign = 1
        if tok[1] in "+-" and tok[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        num = self.take(kind="num")
        if num[1].endswith("i"):
            raise ParseError("imaginary exponent", num[2])
        return sign * Fraction(num[1])

    def factor(self) -> PuiseuxSeries:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            if val.endswith("i"):
                return PuiseuxSeries.constant(GaussianRational(0, Fraction(val[:-1])))
            return PuiseuxSeries.constant(Fraction(val))
        if kind == "i":
            self.take()
            return PuiseuxSeries.constant(GaussianRational(0, 1))
        if kind == "t":
            self.take()
            if self.peek()[1] == "^":
                self.take()
                return t_power(self.exponent())
            return t_power(1)
        if kind == "O":
            self.take()
            self.take("(")
            self.take(kind="t")
            e = Fraction(1)
            if self.peek()[1] == "^":
                self.take()
                e = self.exponent()
            self.take(")")
            return PuiseuxSeries._raw((), e)
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if val == "-":
            self.take()
            return -self.factor()
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_series(text: str) -> PuiseuxSeries:
    """Parse canonical or relaxed series text such as ``1*t^(-1) + 3/2i``."""
    return _SeriesParser(text).parse()
