"""Exact real-root isolation with Sturm sequences over the rationals.

Polynomials are ascending coefficient sequences.  Float coefficients are
flushed (``|c| < 1e-13 * max|c|`` becomes 0) and then converted to the exact
rational with the same binary value, so every count is exact.
"""

from __future__ import annotations

from fractions import Fraction

FLUSH = 1e-13
REFINE_WIDTH = 1e-14


class NonSimpleRootError(ArithmeticError):
    """A repeated root lies inside (-1, 1)."""


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def rationalize(coeffs):
    """Exact ascending coefficients; floats are flushed first."""
    coeffs = list(coeffs)
    if any(isinstance(c, float) for c in coeffs):
        big = max((abs(float(c)) for c in coeffs), default=0.0)
        coeffs = [0 if abs(float(c)) < FLUSH * big else c for c in coeffs]
    out = _trim(Fraction(c) for c in coeffs)
    if not out:
        raise ValueError("zero polynomial")
    return out


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p):
    return [c * k for k, c in enumerate(p)][1:]


def divmod_poly(n, d):
    n = list(n)
    d = _trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(n) - len(d) + 1, 0)
    lead = d[-1]
    for i in range(len(n) - len(d), -1, -1):
        c = n[i + len(d) - 1] / lead
        q[i] = c
        if c:
            for j, dj in enumerate(d):
                n[i + j] -= c * dj
    return _trim(q), _trim(n[: len(d) - 1])


def _monic(p):
    return [c / p[-1] for c in p]


def gcd_poly(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return _monic(a) if a else a


def sturm_sequence(p):
    seq = [p, deriv(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(seq, x):
    signs = []
    for s in seq:
        v = peval(s, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_var_at_inf(seq, sign):
    signs = []
    for s in seq:
        lead = s[-1] * (sign ** (len(s) - 1))
        signs.append(lead > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def distinct_roots(p, lo, hi):
    """Number of distinct roots of ``p`` in ``(lo, hi]`` (``p(lo) != 0``)."""
    seq = sturm_sequence(_trim(p))
    vlo = _variations(seq, lo) if lo is not None else _sign_var_at_inf(seq, -1)
    vhi = _variations(seq, hi) if hi is not None else _sign_var_at_inf(seq, 1)
    return vlo - vhi


def squarefree_part(p):
    g = gcd_poly(p, deriv(p))
    if len(g) <= 1:
        return list(p), [Fraction(1)]
    return divmod_poly(p, g)[0], g


def _strip_root(p, r):
    while peval(p, r) == 0:
        p = divmod_poly(p, [-r, Fraction(1)])[0]
    return p


def _count_open(seq, p, lo, hi):
    # roots in the open interval (lo, hi); p(lo) != 0 assumed
    return _variations(seq, lo) - _variations(seq, hi) - (1 if peval(p, hi) == 0 else 0)


def _isolate(p, lo, hi):
    """Disjoint ``(a, b, poly)`` holding one root of ``poly`` each; ``a == b`` marks an exact root."""
    out = []
    stack = [(p, lo, hi)]
    while stack:
        poly, a, b = stack.pop()
        seq = sturm_sequence(poly)
        n = _count_open(seq, poly, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b, poly))
            continue
        m = (a + b) / 2
        if peval(poly, m) == 0:
            out.append((m, m, poly))
            poly = _strip_root(poly, m)
        stack.append((poly, m, b))
        stack.append((poly, a, m))
    return sorted(out, key=lambda t: t[0])


def _refine(p, a, b):
    if a == b:
        return float(a)
    fa = peval(p, a)
    if peval(p, b) == 0:
        return float(b)
    sa = fa > 0
    while float(b - a) > REFINE_WIDTH:
        m = (a + b) / 2
        fm = peval(p, m)
        if fm == 0:
            return float(m)
        if (fm > 0) == sa:
            a = m
        else:
            b = m
    # Newton polish in floats, kept inside the bracket
    fp = [float(c) for c in p]
    dp = [float(c) for c in deriv(p)]
    lo, hi = float(a), float(b)
    x = 0.5 * (lo + hi)
    for _ in range(4):
        d = peval(dp, x)
        if d == 0:
            break
        nx = x - peval(fp, x) / d
        if not lo <= nx <= hi or nx == x:
            break
        x = nx
    return x


def real_roots_unit_interval(coeffs):
    """Sorted real roots in the open interval (-1, 1), each certified simple.

    Raises :class:`NonSimpleRootError` if a repeated root lies in (-1, 1).
    """
    p = rationalize(coeffs)
    sq, g = squarefree_part(p)
    if len(g) > 1:
        g1 = _strip_root(_strip_root(g, Fraction(1)), Fraction(-1))
        if len(g1) > 1 and _count_open(sturm_sequence(g1), g1, Fraction(-1), Fraction(1)) > 0:
            raise NonSimpleRootError("repeated root inside (-1, 1)")
    sq = _strip_root(_strip_root(sq, Fraction(1)), Fraction(-1))
    if len(sq) <= 1:
        return []
    return [_refine(poly, a, b) for a, b, poly in _isolate(sq, Fraction(-1), Fraction(1))]


def count_roots_unit_interval(coeffs):
    """Distinct real roots in the open interval (-1, 1)."""
    p = rationalize(coeffs)
    sq = _strip_root(_strip_root(squarefree_part(p)[0], Fraction(1)), Fraction(-1))
    if len(sq) <= 1:
        return 0
    return _count_open(sturm_sequence(sq), sq, Fraction(-1), Fraction(1))


def descartes_bound(coeffs):
    """Number of sign changes in the coefficient sequence."""
    signs = [c > 0 for c in coeffs if c != 0]
    if not signs:
        raise ValueError("zero polynomial")
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(p):
    p = _trim(p)
    return 1 + max(abs(c / p[-1]) for c in p[:-1]) if len(p) > 1 else Fraction(1)


def positive_root_count(coeffs):
    """Positive real roots counted with multiplicity."""
    p = rationalize(coeffs)
    total = 0
    while len(p) > 1:
        q = _strip_root(p, Fraction(0))
        if len(q) > 1:
            total += distinct_roots(q, Fraction(0), cauchy_bound(q))
        p = gcd_poly(p, deriv(p))
    return total
