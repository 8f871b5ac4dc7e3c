"""Finite-section check of predicted discrete spectra.

Rays are cut after ``N`` vertices and the resulting finite matrix is
diagonalised with structured Sylvester-inertia bisection: each pendant
chain is eliminated from its far end, leaving only a small dense block.
Predicted eigenvalues outside the band must show up in the truncation, and
nothing else may persist outside the inflated band.  This module only
consumes a predicted :class:`~tailspec.spectra.Spectrum`; it never touches
Jost polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import chain_truncation

DELTA = 0.05
STEP = 17


# ---------------------------------------------------------------- sections


class ArrowSection:
    """Dense base block with pendant tridiagonal chains."""

    def __init__(self, chains):
        self.base = np.ascontiguousarray(chains.base, dtype=float)
        self.cv = np.ascontiguousarray(chains.chain_vertex, dtype=np.int_)
        self.cp = np.ascontiguousarray(chains.chain_ptr, dtype=np.int_)
        self.cd = np.ascontiguousarray(chains.chain_d, dtype=float)
        self.ce = np.ascontiguousarray(chains.chain_e2, dtype=float)
        self.dimension = chains.dimension
        n = self.base.shape[0]
        rad = np.sum(np.abs(self.base), axis=1)
        chain_rad = np.abs(self.cd).copy()
        root = np.sqrt(self.ce)
        for c, v in enumerate(self.cv):
            s, e = self.cp[c], self.cp[c + 1]
            if e > s:
                rad[v] += root[s]
                chain_rad[s:e] += root[s:e]
                chain_rad[s : e - 1] += root[s + 1 : e]
        bound = max(float(np.max(rad)) if n else 0.0, float(np.max(chain_rad)) if len(chain_rad) else 0.0)
        self.bound = bound * (1 + 1e-12) + 1e-300

    def count(self, x):
        """Eigenvalues strictly below ``x``."""
        return int(_kernels.arrow_count(self.base, self.cv, self.cp, self.cd, self.ce, float(x)))

    def eigenvalues(self, lo=0, hi=None):
        hi = self.dimension if hi is None else hi
        if hi <= lo:
            return np.empty(0)
        return np.asarray(
            _kernels.arrow_eigvals(self.base, self.cv, self.cp, self.cd, self.ce, lo, hi, -self.bound, self.bound)
        )


class TridiagonalSection:
    """Symmetric tridiagonal section (diagonal ``d``, off-diagonal ``e``)."""

    def __init__(self, d, e):
        self.d = np.ascontiguousarray(d, dtype=float)
        e = np.asarray(e, dtype=float)
        self.e2 = np.ascontiguousarray(e * e)
        self.dimension = len(self.d)
        ae = np.abs(e)
        rad = np.abs(self.d).copy()
        rad[:-1] += ae
        rad[1:] += ae
        self.bound = float(np.max(rad)) * (1 + 1e-12) + 1e-300 if len(rad) else 1.0

    def count(self, x):
        return int(_kernels.tridiag_count(self.d, self.e2, float(x)))

    def eigenvalues(self, lo=0, hi=None):
        hi = self.dimension if hi is None else hi
        if hi <= lo:
            return np.empty(0)
        return np.asarray(_kernels.tridiag_eigvals(self.d, self.e2, lo, hi, -self.bound, self.bound))


def graph_section(T, N):
    if N < 0:
        raise ValueError("tail length must be nonnegative")
    return ArrowSection(chain_truncation(T, N))


def truncated_eigenvalues(T, N):
    """All eigenvalues of the graph with every ray cut after ``N`` vertices."""
    return graph_section(T, N).eigenvalues()


def two_sided_section(J2, N, scale_sq=1):
    """``sqrt(scale_sq) * J2`` on sites ``n_minus - N .. n_plus + N``."""
    m = J2.truncated(J2.n_minus - N, J2.n_plus + N) * math.sqrt(float(scale_sq))
    return TridiagonalSection(np.diag(m).copy(), np.diag(m, 1).copy())


def bethe_pair_section(d, N):
    """Radial section of two ``d``-ary trees joined at the roots, ``N`` levels each side.

    Non-radial parts of the truncated trees are copies of sections of
    ``sqrt(d) * J_0`` and cannot leave ``[-2 sqrt(d), 2 sqrt(d)]``.
    """
    from .jacobi import bethe_pair_jacobi

    J2, s = bethe_pair_jacobi(d)
    return two_sided_section(J2, N, s)


def full_tree_pair_adjacency(d, depth):
    """Dense adjacency of two complete ``d``-ary trees of given depth joined at the roots."""
    sizes = [d**k for k in range(depth + 1)]
    per_tree = sum(sizes)
    n = 2 * per_tree
    a = np.zeros((n, n))
    for t in range(2):
        off = t * per_tree
        start = 0
        for k in range(depth):
            nxt = start + sizes[k]
            for i in range(sizes[k]):
                for c in range(d):
                    u, v = off + start + i, off + nxt + i * d + c
                    a[u, v] = a[v, u] = 1.0
            start = nxt
    a[0, per_tree] = a[per_tree, 0] = 1.0
    return a


# ---------------------------------------------------------------- comparison


@dataclass(frozen=True)
class Match:
    predicted: float
    truncated: float | None
    error: float | None


@dataclass(frozen=True)
class EmbeddedCheck:
    value: float
    multiplicity: int
    counts: tuple
    passed: bool


@dataclass(frozen=True)
class OracleReport:
    sizes: tuple
    band_edge: float
    delta: float
    tol: float
    matches: tuple
    embedded: tuple
    spurious: tuple
    near_edge: tuple
    passed: bool

    @property
    def max_error(self):
        errs = [m.error for m in self.matches if m.error is not None]
        return max(errs, default=0.0)

    def to_json(self):
        return {
            "sizes": list(self.sizes),
            "band_edge": self.band_edge,
            "delta": self.delta,
            "tol": self.tol,
            "matches": [{"predicted": m.predicted, "truncated": m.truncated, "error": m.error} for m in self.matches],
            "embedded": [
                {"value": e.value, "multiplicity": e.multiplicity, "counts": list(e.counts), "passed": e.passed}
                for e in self.embedded
            ],
            "spurious": list(self.spurious),
            "near_edge": list(self.near_edge),
            "verdict": "pass" if self.passed else "fail",
        }


def outliers(section, edge):
    below = section.count(-edge)
    above = section.count(edge)
    vals = np.concatenate([section.eigenvalues(0, below), section.eigenvalues(above, section.dimension)])
    # count(x) excludes x itself; drop values sitting exactly on the edge
    return [float(v) for v in vals if abs(v) > edge]


def persistent_outliers(source, N, edge, tol=1e-8, step=STEP):
    """Eigenvalues beyond ``edge`` at ``N`` that reappear at ``N + step``."""
    make = _section_factory(source)
    out1, out2 = outliers(make(N), edge), outliers(make(N + step), edge)
    persist = max(10 * tol, 1e-6)
    return [x for x in out1 if any(abs(x - y) <= persist for y in out2)]


def _greedy(predicted, found):
    pairs = sorted((abs(p - f), i, j) for i, p in enumerate(predicted) for j, f in enumerate(found))
    used_p, used_f, out = set(), set(), {}
    for err, i, j in pairs:
        if i in used_p or j in used_f:
            continue
        used_p.add(i)
        used_f.add(j)
        out[i] = (j, err)
    return out


def _section_factory(source):
    if callable(source):
        return source
    return lambda N: graph_section(source, N)


def compare(predicted, source, N, delta=DELTA, tol=1e-8, step=STEP):
    """Check ``predicted`` against truncations at ``N`` and ``N + step``.

    ``source`` is a tailed graph or a callable ``N -> section``.
    """
    make = _section_factory(source)
    edge = max((max(abs(b.lo), abs(b.hi)) for b in predicted.bands), default=2.0)
    cut = edge + delta
    sec1, sec2 = make(N), make(N + step)
    out1, out2 = outliers(sec1, cut), outliers(sec2, cut)
    far = []
    near = []
    embedded = []
    for e in predicted.discrete:
        if abs(e.value) > cut:
            far += [e.value] * e.multiplicity
        elif abs(e.value) > edge:
            near.append(e.value)
        else:
            embedded.append(e)
    assign = _greedy(far, out1)
    matches = []
    ok = True
    for i, p in enumerate(far):
        if i in assign:
            j, err = assign[i]
            matches.append(Match(p, out1[j], err))
            ok &= err <= tol
        else:
            matches.append(Match(p, None, None))
            ok = False
    taken = {j for j, _ in assign.values()}
    unmatched1 = [out1[j] for j in range(len(out1)) if j not in taken]
    assign2 = _greedy(far, out2)
    taken2 = {j for j, _ in assign2.values()}
    unmatched2 = [out2[j] for j in range(len(out2)) if j not in taken2]
    persist = max(10 * tol, 1e-6)
    spurious = tuple(x for x in unmatched1 if any(abs(x - y) <= persist for y in unmatched2))
    ok &= not spurious
    checks = []
    w = 10 * tol
    for e in embedded:
        counts = tuple(sec.count(e.value + w) - sec.count(e.value - w) for sec in (sec1, sec2))
        passed = all(c >= e.multiplicity for c in counts)
        ok &= passed
        checks.append(EmbeddedCheck(e.value, e.multiplicity, counts, passed))
    return OracleReport(
        sizes=(N, N + step),
        band_edge=edge,
        delta=delta,
        tol=tol,
        matches=tuple(matches),
        embedded=tuple(checks),
        spurious=spurious,
        near_edge=tuple(near),
        passed=bool(ok),
    )


def convergence_study(predicted, source, sizes, delta=DELTA):
    """Rows ``(N, errors, max_error)`` for the predicted outliers at each size."""
    if len(sizes) < 2:
        raise ValueError("need at least two sizes")
    make = _section_factory(source)
    edge = max((max(abs(b.lo), abs(b.hi)) for b in predicted.bands), default=2.0)
    cut = edge + delta
    far = []
    for e in predicted.discrete:
        if abs(e.value) > cut:
            far += [e.value] * e.multiplicity
    rows = []
    for N in sizes:
        out = outliers(make(N), cut)
        assign = _greedy(far, out)
        errs = tuple(assign[i][1] if i in assign else math.inf for i in range(len(far)))
        rows.append((N, errs, max(errs, default=0.0)))
    return rows
