"""Tropical and exploded semiring arithmetic.

Values are formal products c*t^x with t infinitesimally small, so the
induced order on tropical values is reversed against the exponent and
addition keeps the smaller exponent.  Two coefficient backends are
supported and never mixed silently: exact Gaussian rationals, and
double-precision complex numbers.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import DomainError, UsageError
from .rational import GaussianRational, format_fraction, parse_fraction

EXACT = "exact"
FLOAT = "float"


@total_ordering
@dataclass(frozen=True)
class TropicalNumber:
    """Element t^x of the tropical semiring; t^x > t^y iff x < y."""

    exponent: Fraction

    def __mul__(self, other: "TropicalNumber") -> "TropicalNumber":
        return TropicalNumber(self.exponent + other.exponent)

    def __add__(self, other: "TropicalNumber") -> "TropicalNumber":
        return TropicalNumber(min(self.exponent, other.exponent))

    def __lt__(self, other: "TropicalNumber") -> bool:
        return self.exponent > other.exponent

    def __str__(self):
        return f"t^{format_fraction(self.exponent)}"


def _backend_of(coeff) -> str:
    if isinstance(coeff, GaussianRational):
        return EXACT
    if isinstance(coeff, complex):
        return FLOAT
    raise UsageError(f"unsupported coefficient type {type(coeff).__name__}")


def _coerce_coeff(coeff):
    """Accept ints/Fractions as exact, floats as float backend."""
    if isinstance(coeff, (GaussianRational, complex)):
        return coeff
    if isinstance(coeff, (int, Fraction)):
        return GaussianRational.of(coeff)
    if isinstance(coeff, float):
        return complex(coeff)
    if isinstance(coeff, str):
        return GaussianRational.of(coeff)
    raise UsageError(f"unsupported coefficient type {type(coeff).__name__}")


@dataclass(frozen=True)
class ExplodedNumber:
    """Element c*t^x of the exploded semiring (c may be 0 in the ambient ring)."""

    coeff: GaussianRational | complex
    exp: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", _coerce_coeff(self.coeff))
        object.__setattr__(self, "exp", Fraction(self.exp))

    @property
    def backend(self) -> str:
        return _backend_of(self.coeff)

    def _check_backend(self, other: "ExplodedNumber"):
        if self.backend != other.backend:
            raise UsageError(
                f"mixed coefficient backends: {self.backend} vs {other.backend}"
            )

    def __mul__(self, other: "ExplodedNumber") -> "ExplodedNumber":
        self._check_backend(other)
        return ExplodedNumber(self.coeff * other.coeff, self.exp + other.exp)

    def __add__(self, other: "ExplodedNumber") -> "ExplodedNumber":
        self._check_backend(other)
        if self.exp < other.exp:
            return self
        if self.exp > other.exp:
            return other
        return ExplodedNumber(self.coeff + other.coeff, self.exp)

    def __pow__(self, k: int) -> "ExplodedNumber":
        if not isinstance(k, int):
            raise UsageError("exploded powers must be integers")
        if k < 0 and not self.coeff:
            raise DomainError("negative power of zero coefficient")
        if isinstance(self.coeff, GaussianRational):
            c = self.coeff**k
        else:
            c = self.coeff**k
        return ExplodedNumber(c, self.exp * k)

    def is_function_value(self) -> bool:
        """Whether the value lies in the invertible-coefficient semiring."""
        return bool(self.coeff)

    def require_function_value(self) -> "ExplodedNumber":
        if not self.coeff:
            raise DomainError("zero coefficient is not a valid exploded-function value")
        return self

    def __str__(self):
        if isinstance(self.coeff, GaussianRational):
            c = str(self.coeff)
        else:
            c = repr(self.coeff.real) if self.coeff.imag == 0 else repr(self.coeff)
        if any(ch in c[1:] for ch in "+-/") or c.endswith("i"):
            c = f"({c})"
        return f"{c}t^{format_fraction(self.exp)}"


def iota(c, backend: str = EXACT) -> ExplodedNumber:
    """Semiring inclusion c -> c*t^0."""
    if backend == FLOAT and not isinstance(c, (complex, float)):
        c = complex(c)
    return ExplodedNumber(c, Fraction(0))


def expl_mul(a: ExplodedNumber, b: ExplodedNumber) -> ExplodedNumber:
    return a * b


def expl_add(a: ExplodedNumber, b: ExplodedNumber) -> ExplodedNumber:
    return a + b


def tropical_part(a: ExplodedNumber) -> TropicalNumber:
    """The exponent-only homomorphism onto the tropical semiring."""
    return TropicalNumber(a.exp)


def smooth_part(a: ExplodedNumber):
    """Set t = 0: the coefficient at exponent 0.  Defined only for exp >= 0."""
    if a.exp < 0:
        raise DomainError("smooth part undefined for negative exponents")
    if a.exp == 0:
        return a.coeff
    return GaussianRational() if a.backend == EXACT else 0j


@dataclass(frozen=True)
class PositiveRealExploded:
    """Element x*t^y with x > 0 real; totally ordered with t infinitesimal."""

    coeff: Fraction | float
    exp: Fraction

    def __post_init__(self):
        if not self.coeff > 0:
            raise DomainError("positive exploded values need positive coefficients")
        object.__setattr__(self, "exp", Fraction(self.exp))

    def __mul__(self, other: "PositiveRealExploded") -> "PositiveRealExploded":
        return PositiveRealExploded(self.coeff * other.coeff, self.exp + other.exp)

    def __lt__(self, other):
        return compare_positive(self, other) < 0

    def __le__(self, other):
        return compare_positive(self, other) <= 0

    def __gt__(self, other):
        return compare_positive(self, other) > 0

    def __ge__(self, other):
        return compare_positive(self, other) >= 0


def compare_positive(a: PositiveRealExploded, b: PositiveRealExploded) -> int:
    """-1/0/+1; x1*t^y1 < x2*t^y2 iff y1 > y2, or y1 = y2 and x1 < x2."""
    if a.exp != b.exp:
        return -1 if a.exp > b.exp else 1
    if a.coeff == b.coeff:
        return 0
    return -1 if a.coeff < b.coeff else 1


# --- expression parser for the CLI `eval` subcommand -----------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<name>[ti])|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise UsageError(f"cannot parse expression near {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("rat"):
            tokens.append(("rat", Fraction(m.group("rat"))))
        elif m.group("name"):
            tokens.append((m.group("name"), None))
        else:
            tokens.append((m.group("op"), None))
    return tokens


class _Parser:
    """Recursive descent over +, -, * and t^p/q with implicit multiplication."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self):
        if self.i >= len(self.tokens):
            raise UsageError("unexpected end of expression")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> ExplodedNumber:
        value = self.expr()
        if self.peek() is not None:
            raise UsageError("trailing tokens in expression")
        return value

    def expr(self) -> ExplodedNumber:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            if op == "-":
                rhs = ExplodedNumber(rhs.coeff * GaussianRational.of(-1), rhs.exp)
            value = value + rhs
        return value

    def term(self) -> ExplodedNumber:
        value = self.factor()
        while True:
            nxt = self.peek()
            if nxt == "*":
                self.next()
                value = value * self.factor()
            elif nxt in ("rat", "t", "i", "("):
                value = value * self.factor()  # juxtaposition
            else:
                return value

    def factor(self) -> ExplodedNumber:
        kind, payload = self.next()
        if kind == "rat":
            base = iota(GaussianRational(payload))
        elif kind == "i":
            base = iota(GaussianRational(Fraction(0), Fraction(1)))
        elif kind == "t":
            base = ExplodedNumber(GaussianRational.of(1), self._exponent_after_t())
            return base
        elif kind == "(":
            base = self.expr()
            if self.peek() != ")":
                raise UsageError("unbalanced parenthesis")
            self.next()
        elif kind == "-":
            inner = self.factor()
            return ExplodedNumber(inner.coeff * GaussianRational.of(-1), inner.exp)
        else:
            raise UsageError(f"unexpected token {kind!r} in expression")
        if self.peek() == "^":
            self.next()
            base = base ** self._signed_int()
        return base

    def _exponent_after_t(self) -> Fraction:
        if self.peek() != "^":
            return Fraction(1)
        self.next()
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        kind, payload = self.next()
        if kind != "rat":
            raise UsageError("t^ must be followed by a rational exponent")
        return sign * payload

    def _signed_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        kind, payload = self.next()
        if kind != "rat" or payload.denominator != 1:
            raise UsageError("powers of subexpressions must be integers")
        return sign * payload.numerator


def parse_expression(text: str) -> ExplodedNumber:
    """Evaluate an exact exploded-semiring expression like "3t^1 + 5t^1"."""
    tokens = _tokenize(text)
    if not tokens:
        raise UsageError("empty expression")
    return _Parser(tokens).parse()


def magnitude(a: ExplodedNumber) -> float:
    """|coefficient| as a float (both backends)."""
    if isinstance(a.coeff, GaussianRational):
        return abs(complex(a.coeff))
    return abs(a.coeff)


def coeff_complex(a: ExplodedNumber) -> complex:
    return complex(a.coeff) if isinstance(a.coeff, GaussianRational) else a.coeff


def phase(a: ExplodedNumber) -> float:
    return cmath.phase(coeff_complex(a))
