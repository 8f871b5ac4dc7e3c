"""Exact-rational / float helpers shared across the package."""

from fractions import Fraction
from math import isqrt

import numpy as np

Number = Fraction | float


def parse_rational(value):
    """Parse ``int``, ``Fraction``, ``"p/q"`` or a decimal string exactly.

    JSON floats are read by their decimal text, so ``1.5`` gives ``3/2``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def format_rational(q):
    """Canonical text form: ``"p"`` for integers, ``"p/q"`` otherwise."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_exact(x):
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def to_exact(x):
    """Exact conversion; floats keep their binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))


def rational_sqrt(q):
    """Square root of a nonnegative rational when it is rational, else ``None``."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def fsqrt(q):
    return float(np.sqrt(float(q)))
