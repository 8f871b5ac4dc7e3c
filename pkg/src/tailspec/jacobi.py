"""Eventually free Jacobi matrices, Jost solutions, determinants and Wronskians.

Off-diagonal entries are carried as squares ``a_j**2``.  The Jost recursion is
rescaled so that only ``b_n`` and ``a_n**2`` appear:

    v_{n-1} = (z + 1/z - b_n) v_n - a_n**2 v_{n+1},    v_n = z**n for n > q,

with ``v_n = (a_{n+1} ... a_q) a_n u_n`` for the true Jost solution ``u``
(``a_0 = 1``).  Rational ``b`` and ``a**2`` therefore give rational
coefficients even when ``a`` itself is irrational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .laurent import ONE, Z, ZINV, LaurentPoly
from .rational import is_exact, parse_rational, rational_sqrt


def _num(x):
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction, str)):
        return parse_rational(x)
    return float(x)


def _unify(values, exact):
    return tuple(Fraction(v) if exact else float(v) for v in values)


@dataclass(frozen=True)
class FiniteRankJacobi:
    """``J({b_1..b_q}, {a_1..a_q})``; ``b_j = 0`` and ``a_j = 1`` for ``j > q``.

    ``a_j`` couples sites ``j`` and ``j + 1``; only ``a_j**2`` is stored.
    Trailing free entries are trimmed, so ``q`` is the true rank window.
    """

    b: tuple = ()
    a_sq: tuple = ()

    def __post_init__(self):
        b = [_num(x) for x in self.b]
        a_sq = [_num(x) for x in self.a_sq]
        if any(not x > 0 for x in a_sq):
            raise ValueError("off-diagonal entries must be positive")
        while b and b[-1] == 0:
            b.pop()
        while a_sq and a_sq[-1] == 1:
            a_sq.pop()
        q = max(len(b), len(a_sq))
        b += [0] * (q - len(b))
        a_sq += [1] * (q - len(a_sq))
        exact = all(is_exact(x) for x in b + a_sq)
        object.__setattr__(self, "b", _unify(b, exact))
        object.__setattr__(self, "a_sq", _unify(a_sq, exact))

    @classmethod
    def from_a(cls, b=(), a=()):
        """Build from off-diagonals ``a`` rather than their squares."""
        return cls(b, tuple(_num(x) ** 2 if not isinstance(x, float) else x * x for x in a))

    @property
    def q(self):
        return len(self.b)

    @property
    def exact(self):
        return all(is_exact(x) for x in self.b + self.a_sq)

    def b_at(self, n):
        return self.b[n - 1] if 1 <= n <= self.q else 0

    def a_sq_at(self, n):
        return self.a_sq[n - 1] if 1 <= n <= self.q else 1

    def a_at(self, n):
        return math.sqrt(float(self.a_sq_at(n)))

    def to_float(self):
        return FiniteRankJacobi(tuple(map(float, self.b)), tuple(map(float, self.a_sq)))

    def rescale(self, k=0):
        """``prod_{j=k+1..q} a_j * a_k`` with ``a_0 = 1``, as a float."""
        out = 1.0 if k == 0 else self.a_at(k)
        for j in range(k + 1, self.q + 1):
            out *= self.a_at(j)
        return out

    def rescale_sq(self, k=0):
        out = Fraction(1) if self.exact else 1.0
        if k > 0:
            out *= self.a_sq_at(k)
        for j in range(k + 1, self.q + 1):
            out *= self.a_sq[j - 1]
        return out

    def truncated(self, m):
        """Leading ``m x m`` section as a dense float array."""
        import numpy as np

        out = np.zeros((m, m))
        for i in range(m):
            out[i, i] = float(self.b_at(i + 1))
            if i + 1 < m:
                out[i, i + 1] = out[i + 1, i] = self.a_at(i + 1)
        return out


FREE = FiniteRankJacobi()


def alpha_one_sided(a_sq):
    """``1 - a**2``."""
    return 1 - a_sq


def alpha_two_sided(a):
    """``1/a - a``."""
    return 1 / a - a


# ---------------------------------------------------------------- Jost solutions


def _lam(exact):
    if exact:
        return Z + ZINV
    return (Z + ZINV).to_float()


def jost_solutions(J):
    """Rescaled Jost solutions ``[v_0, ..., v_{q+1}]`` as Laurent polynomials."""
    lam = _lam(J.exact)
    one = 1 if J.exact else 1.0
    q = J.q
    sol = [None] * (q + 2)
    sol[q + 1] = LaurentPoly.monomial(q + 1, Fraction(one) if J.exact else one)
    nxt = LaurentPoly.monomial(q + 2, Fraction(one) if J.exact else one)
    for n in range(q + 1, 0, -1):
        after = sol[n + 1] if n + 1 <= q + 1 else nxt
        sol[n - 1] = (lam - J.b_at(n)) * sol[n] - after * J.a_sq_at(n)
    return sol


def jost_solution(J, k):
    """``(v_k, c_k)`` with ``v_k = c_k * u_k`` and ``c_k = (a_{k+1}..a_q) a_k``."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    if k > J.q:
        one = Fraction(1) if J.exact else 1.0
        return LaurentPoly.monomial(k, one), 1.0
    return jost_solutions(J)[k], J.rescale(k)


@dataclass(frozen=True)
class JostPolynomial:
    """``v_0(z)`` as an ordinary polynomial; the Jost function is ``v_0 / rescale``.

    ``rescale = prod a_j`` (a positive real); ``rescale_sq`` is its square,
    exact when the matrix is.
    """

    coeffs: tuple  # ascending
    rescale: float
    rescale_sq: object

    @property
    def laurent(self):
        return LaurentPoly.from_poly(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        return self.laurent(z)

    def jost_function(self, z):
        return self.laurent(z) / self.rescale


def jost_polynomial(J):
    v0 = jost_solution(J, 0)[0]
    if v0.low < 0:
        raise AssertionError("Jost polynomial has negative powers")
    coeffs = tuple(v0.to_poly())
    if coeffs[0] == 0:
        raise AssertionError("Jost polynomial vanishes at z = 0")
    return JostPolynomial(coeffs, J.rescale(0), J.rescale_sq(0))


def jost_function_float(J, z):
    """Unscaled Jost function ``u(z)`` by the plain float recurrence."""
    z = complex(z) if isinstance(z, complex) else float(z)
    lam = z + 1 / z
    q = J.q
    u_next, u = z ** (q + 2), z ** (q + 1)
    for n in range(q + 1, 0, -1):
        a_prev = J.a_at(n - 1) if n > 1 else 1.0
        u_prev = ((lam - float(J.b_at(n))) * u - J.a_at(n) * u_next) / a_prev
        u_next, u = u, u_prev
    return u


# ---------------------------------------------------------------- direct determinant

MAX_DIRECT_RANK = 6


def _alg_mul(x, y, squares):
    out = {}
    for s1, c1 in x.items():
        for s2, c2 in y.items():
            c = c1 * c2
            for i in s1 & s2:
                c *= squares[i]
            key = s1 ^ s2
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v != 0}


def _alg_add(x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _poly_mul(p, r, squares):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in r.items():
            prod_ = _alg_mul(c1, c2, squares)
            if prod_:
                out[e1 + e2] = _alg_add(out.get(e1 + e2, {}), prod_)
    return {k: v for k, v in out.items() if v}


def _poly_add(p, r):
    out = dict(p)
    for k, v in r.items():
        out[k] = _alg_add(out.get(k, {}), v)
    return {k: v for k, v in out.items() if v}


def free_resolvent_entry(i, j):
    """``(z**|i-j| - z**(i+j)) / (z - 1/z)`` as an exact polynomial."""
    num = LaurentPoly(0, ()) + LaurentPoly.monomial(abs(i - j), Fraction(1)) - LaurentPoly.monomial(i + j, Fraction(1))
    return num.exact_div(Z - ZINV)


def perturbation_determinant_direct(J):
    """``det(I + (J - J_0) R_0)`` on the perturbation window, expanded exactly.

    Irrational ``a_j`` are handled symbolically: entries live in the algebra
    generated by the ``a_j`` with ``a_j * a_j = a_j**2``.
    """
    if not J.exact:
        raise ValueError("direct determinant needs exact entries")
    if J.q > MAX_DIRECT_RANK:
        raise ValueError(f"rank window {J.q} exceeds {MAX_DIRECT_RANK}")
    q = J.q
    if q == 0:
        return LaurentPoly.const(Fraction(1))
    m = q + 1
    squares = {i: J.a_sq_at(i) for i in range(1, q + 1)}
    empty = frozenset()

    def a_minus_one(i):
        root = rational_sqrt(squares[i])
        if root is not None:
            return {empty: root - 1} if root != 1 else {}
        return {frozenset([i]): Fraction(1), empty: Fraction(-1)}

    V = [[{} for _ in range(m)] for _ in range(m)]
    for i in range(1, q + 1):
        if J.b_at(i) != 0:
            V[i - 1][i - 1] = {empty: J.b_at(i)}
        off = a_minus_one(i)
        V[i - 1][i] = V[i][i - 1] = off
    R = [[{e: {empty: c} for e, c in free_resolvent_entry(i, j).as_dict().items()} for j in range(1, m + 1)] for i in range(1, m + 1)]
    M = [[{} for _ in range(m)] for _ in range(m)]
    for i, j in product(range(m), range(m)):
        acc = {0: {empty: Fraction(1)}} if i == j else {}
        for k in range(m):
            if V[i][k]:
                acc = _poly_add(acc, _poly_mul({0: V[i][k]}, R[k][j], squares))
        M[i][j] = acc
    # Laplace expansion along rows, memoised over used column sets
    f = {0: {0: {empty: Fraction(1)}}}
    for row in range(m):
        g = {}
        for mask, val in f.items():
            for col in range(m):
                if mask >> col & 1 or not M[row][col]:
                    continue
                sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                term = _poly_mul(val, M[row][col], squares)
                if sign < 0:
                    term = {e: {s: -c for s, c in v.items()} for e, v in term.items()}
                nm = mask | 1 << col
                g[nm] = _poly_add(g.get(nm, {}), term)
        f = g
    det = f.get((1 << m) - 1, {})
    coeffs = {}
    for e, v in det.items():
        if any(s for s in v):
            raise AssertionError("determinant did not reduce to rational coefficients")
        coeffs[e] = v.get(empty, Fraction(0))
    if not coeffs:
        return LaurentPoly(0, ())
    low = min(coeffs)
    return LaurentPoly(low, tuple(coeffs.get(k, Fraction(0)) for k in range(low, max(coeffs) + 1)))


# ---------------------------------------------------------------- two-sided


@dataclass(frozen=True)
class TwoSidedJacobi:
    """Doubly infinite Jacobi matrix, free outside the window ``[n_minus, n_plus]``.

    ``b[k]`` is ``b_{n_minus + k}`` for the window sites and ``a_sq[k]`` is
    ``a_{n_minus + k}**2`` for ``n_minus <= n < n_plus`` (``a_n`` couples
    ``n`` and ``n + 1``).
    """

    n_minus: int
    n_plus: int
    b: tuple
    a_sq: tuple

    def __post_init__(self):
        if not self.n_minus < self.n_plus:
            raise ValueError("window needs n_minus < n_plus")
        width = self.n_plus - self.n_minus
        b = [_num(x) for x in self.b] or [0] * (width + 1)
        a_sq = [_num(x) for x in self.a_sq]
        if len(b) != width + 1 or len(a_sq) != width:
            raise ValueError("window sizes do not match b and a_sq")
        if any(not x > 0 for x in a_sq):
            raise ValueError("off-diagonal entries must be positive")
        exact = all(is_exact(x) for x in b + a_sq)
        object.__setattr__(self, "b", _unify(b, exact))
        object.__setattr__(self, "a_sq", _unify(a_sq, exact))

    @property
    def exact(self):
        return all(is_exact(x) for x in self.b + self.a_sq)

    def b_at(self, n):
        return self.b[n - self.n_minus] if self.n_minus <= n <= self.n_plus else 0

    def a_sq_at(self, n):
        return self.a_sq[n - self.n_minus] if self.n_minus <= n < self.n_plus else 1

    def rescale(self):
        """``prod a_n`` over the window."""
        return math.prod(math.sqrt(float(x)) for x in self.a_sq)

    def truncated(self, n_lo, n_hi):
        """Dense float section on sites ``n_lo..n_hi``."""
        import numpy as np

        m = n_hi - n_lo + 1
        out = np.zeros((m, m))
        for i in range(m):
            n = n_lo + i
            out[i, i] = float(self.b_at(n))
            if i + 1 < m:
                out[i, i + 1] = out[i + 1, i] = math.sqrt(float(self.a_sq_at(n)))
        return out


def _two_sided_solutions(J2, lo, hi):
    lam = _lam(J2.exact)
    one = Fraction(1) if J2.exact else 1.0
    plus = {}
    top = max(hi + 1, J2.n_plus + 1)
    plus[top] = LaurentPoly.monomial(top, one)
    plus[top - 1] = LaurentPoly.monomial(top - 1, one)
    for n in range(top - 1, lo, -1):
        plus[n - 1] = (lam - J2.b_at(n)) * plus[n] - plus[n + 1] * J2.a_sq_at(n)
    minus = {}
    bottom = min(lo - 1, J2.n_minus - 1)
    minus[bottom] = LaurentPoly.monomial(-bottom, one)
    minus[bottom + 1] = LaurentPoly.monomial(-bottom - 1, one)
    for n in range(bottom + 1, hi + 1):
        minus[n + 1] = (lam - J2.b_at(n)) * minus[n] - minus[n - 1] * J2.a_sq_at(n - 1)
    return plus, minus


def wronskian_at(J2, n):
    """Rescaled Wronskian ``v+_n v-_{n+1} - a_n**2 v+_{n+1} v-_n`` at site ``n``."""
    plus, minus = _two_sided_solutions(J2, n, n + 1)
    return plus[n] * minus[n + 1] - plus[n + 1] * minus[n] * J2.a_sq_at(n)


def wronskian(J2):
    """``(W, rescale)`` where ``W = rescale * [u+, u-]`` and ``rescale = prod a_n``.

    Evaluated at ``n_minus - 1`` and at ``n_plus``; the two must agree.
    """
    w1 = wronskian_at(J2, J2.n_minus - 1)
    w2 = wronskian_at(J2, J2.n_plus)
    if J2.exact:
        same = w1 == w2
    else:
        diff = w1 - w2
        scale = max((abs(c) for c in w1.coeffs), default=1.0)
        same = all(abs(c) <= 1e-9 * scale for c in diff.coeffs)
    if not same:
        raise AssertionError("Wronskian depends on the site index")
    return w1, J2.rescale()


def double_star_jacobi(p, q, d=1):
    """``a_1 = sqrt(p)``, ``a_{-1} = sqrt(q)``, ``a_0 = d``; zero diagonal."""
    if p < 2 or q < 2:
        raise ValueError("double star needs p, q >= 2")
    d = _num(d)
    if not d > 0:
        raise ValueError("bridge weight must be positive")
    return TwoSidedJacobi(-1, 2, (0, 0, 0, 0), (_num(q), d * d, _num(p)))


def bethe_pair_jacobi(d):
    """Radial part of two ``d``-ary trees joined at their roots.

    Returns ``(J, d)``: the radial operator equals ``sqrt(d) * J`` with
    ``a_0 = 1/sqrt(d)`` and every other entry free.
    """
    if d < 1:
        raise ValueError("tree degree must be >= 1")
    return TwoSidedJacobi(0, 1, (0, 0), (Fraction(1, int(d)),)), int(d)


__all__ = [
    "FREE",
    "FiniteRankJacobi",
    "JostPolynomial",
    "TwoSidedJacobi",
    "alpha_one_sided",
    "alpha_two_sided",
    "bethe_pair_jacobi",
    "double_star_jacobi",
    "free_resolvent_entry",
    "jost_function_float",
    "jost_polynomial",
    "jost_solution",
    "jost_solutions",
    "perturbation_determinant_direct",
    "wronskian",
    "wronskian_at",
]
