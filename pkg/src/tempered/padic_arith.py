"""Exact scalars for a discretely valued field, modelled on Q inside Q_p.

Scalars are plain :class:`fractions.Fraction` values; norm values are
nonnegative Fractions as well, so every comparison in the package is exact.
"""
from fractions import Fraction
from math import inf, isqrt

from .errors import FormatError
from .kernels import int_valuation

__all__ = ["Prime", "as_scalar", "valuation", "abs_value", "parse_rational",
           "format_rational"]


class Prime(int):
    """An integer p >= 2 checked for primality at construction."""

    def __new__(cls, p):
        if isinstance(p, Prime):
            return p
        if isinstance(p, bool) or int(p) != p:
            raise ValueError(f"prime must be an integer, got {p!r}")
        p = int(p)
        if p < 2 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        return super().__new__(cls, p)

    def __repr__(self):
        return f"Prime({int(self)})"


def as_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def valuation(x, p):
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = as_scalar(x)
    if x == 0:
        return inf
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def abs_value(x, p):
    """|x|_p = p^(-v_p(x)) as an exact Fraction (0 for x = 0)."""
    x = as_scalar(x)
    if x == 0:
        return Fraction(0)
    v = int_valuation(x.numerator, p) - int_valuation(x.denominator, p)
    return Fraction(1, p ** v) if v >= 0 else Fraction(p ** -v)


def parse_rational(text):
    """Parse ``a`` or ``a/b``; anything else is a :class:`FormatError`."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            if not den.strip():
                raise ValueError
            d = int(den)
            if d == 0:
                raise FormatError(f"zero denominator in {text!r}")
            return Fraction(int(num), d)
        return Fraction(int(num))
    except ValueError:
        raise FormatError(f"not a rational literal: {text!r}") from None


def format_rational(x):
    x = as_scalar(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
