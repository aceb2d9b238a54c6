"""Exact rational and Gaussian-rational scalars plus their string forms.

All exponents in the kernel are `fractions.Fraction`; exact coefficients
are Gaussian rationals (pairs of Fractions).  Strings are decimal-free:
"5", "-3/2", "1/2+3i", "2-i", "i".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_fraction(text: str | int) -> Fraction:
    """Parse "p/q" or "p" (also accepts plain ints)."""
    if isinstance(text, int):
        return Fraction(text)
    text = text.strip()
    if not _FRACTION_RE.match(text):
        raise ValueError(f"not a decimal-free fraction: {text!r}")
    return Fraction(text)


def format_fraction(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex scalar re + im*i with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value))
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) + (-self)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.of(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("Gaussian rational powers must be integers")
        if k < 0:
            return GaussianRational(Fraction(1)) / self ** (-k)
        out = GaussianRational(Fraction(1))
        base = self
        e = k
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return format_gaussian(self)


_I_TERM_RE = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?i$")


def parse_gaussian(text: str) -> GaussianRational:
    """Parse canonical exact complex strings like "1/2-3i" or "i"."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian-rational string")
    # Split into at most two signed terms.
    terms = re.findall(r"[+-]?[^+-]+", s)
    if not 1 <= len(terms) <= 2:
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_re = seen_im = False
    for term in terms:
        m = _I_TERM_RE.match(term)
        if m:
            if seen_im:
                raise ValueError(f"duplicate imaginary part in {text!r}")
            seen_im = True
            mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            im_part = -mag if m.group(1) == "-" else mag
        else:
            if seen_re or not _FRACTION_RE.match(term):
                raise ValueError(f"not a Gaussian rational: {text!r}")
            seen_re = True
            re_part = Fraction(term)
    return GaussianRational(re_part, im_part)


def format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return format_fraction(z.re)
    if z.im == 1:
        imag = "i"
    elif z.im == -1:
        imag = "-i"
    else:
        imag = f"{format_fraction(z.im)}i"
    if z.re == 0:
        return imag
    sign = "+" if z.im > 0 else ""
    return f"{format_fraction(z.re)}{sign}{imag}"
