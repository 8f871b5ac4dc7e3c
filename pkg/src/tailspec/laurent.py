"""Finite Laurent polynomials with exact-rational or float coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rational import format_rational, is_exact


def _is_zero(c):
    return c == 0


@dataclass(frozen=True)
class LaurentPoly:
    """``sum(coeffs[k] * z**(low + k))``, trimmed so both end coefficients are nonzero.

    The zero polynomial is ``LaurentPoly(0, ())``.
    """

    low: int
    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        low = int(self.low)
        start = 0
        while start < len(c) and _is_zero(c[start]):
            start += 1
        end = len(c)
        while end > start and _is_zero(c[end - 1]):
            end -= 1
        c = c[start:end]
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "low", low + start if c else 0)

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls(0, (c,))

    @classmethod
    def monomial(cls, k, c=Fraction(1)):
        return cls(k, (c,))

    @classmethod
    def from_poly(cls, coeffs):
        """From ascending ordinary-polynomial coefficients."""
        return cls(0, tuple(coeffs))

    # shape ---------------------------------------------------------------
    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def high(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no degree")
        return self.low + len(self.coeffs) - 1

    @property
    def exact(self):
        return all(is_exact(c) for c in self.coeffs)

    def coeff(self, k):
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def as_dict(self):
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        return LaurentPoly(low, tuple(self.coeff(k) + other.coeff(k) for k in range(low, high + 1)))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.low, tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return LaurentPoly(0, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(self.low + other.low, tuple(out))

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``z**k``."""
        return LaurentPoly(self.low + k, self.coeffs)

    def map(self, f):
        return LaurentPoly(self.low, tuple(f(c) for c in self.coeffs))

    def to_float(self):
        return self.map(float)

    def reflect(self):
        """``p(1/z)``."""
        return LaurentPoly(-self.high, tuple(reversed(self.coeffs))) if self.coeffs else self

    def substitute_neg(self):
        """``p(-z)``."""
        return LaurentPoly(self.low, tuple(c if (self.low + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    # evaluation ----------------------------------------------------------
    def __call__(self, z):
        if self.is_zero:
            return 0 * z
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc * z**self.low if self.low else acc

    def derivative(self):
        return LaurentPoly(self.low - 1, tuple(c * (self.low + i) for i, c in enumerate(self.coeffs)))

    # polynomial views ----------------------------------------------------
    def to_poly(self):
        """Ascending coefficients of an ordinary polynomial (``low >= 0`` required)."""
        if self.is_zero:
            return []
        if self.low < 0:
            raise ValueError("Laurent polynomial has negative powers")
        return [0] * self.low + list(self.coeffs)

    def exact_div(self, divisor):
        """Quotient by ``divisor``; raises ``ArithmeticError`` if there is a remainder."""
        if divisor.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return self
        num = list(self.coeffs)
        den = divisor.coeffs
        if len(num) < len(den):
            raise ArithmeticError("division leaves a remainder")
        lead = den[-1]
        q = [0] * (len(num) - len(den) + 1)
        for i in range(len(q) - 1, -1, -1):
            c = num[i + len(den) - 1] / lead
            q[i] = c
            if c != 0:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        if any(x != 0 for x in num[: len(den) - 1]):
            raise ArithmeticError("division leaves a remainder")
        return LaurentPoly(self.low - divisor.low, tuple(q))

    # text ------------------------------------------------------------------
    def to_json(self):
        fmt = format_rational if self.exact else float
        return {"low": self.low, "coeffs": [fmt(c) for c in self.coeffs]}

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k, c in sorted(self.as_dict().items()):
            cs = format_rational(c) if is_exact(c) else repr(c)
            terms.append(cs if k == 0 else f"{cs}*z^{k}")
        return " + ".join(terms)


Z = LaurentPoly(1, (Fraction(1),))
ZINV = LaurentPoly(-1, (Fraction(1),))
ONE = LaurentPoly(0, (Fraction(1),))
