"""Pure-Python reference kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``TAILSPEC_PURE_PYTHON`` is set.
"""

import math

import numpy as np

_EPS = np.finfo(float).eps
_SAFEMIN = np.finfo(float).tiny
_BUNCH_ALPHA = (1.0 + math.sqrt(17.0)) / 8.0


def tridiag_count(d, e2, x):
    """Number of eigenvalues strictly below ``x``.

    ``d`` is the diagonal, ``e2[i]`` the squared coupling between ``i`` and
    ``i + 1`` (length ``len(d) - 1``).
    """
    n = len(d)
    pivmin = _SAFEMIN * max(1.0, max(e2) if len(e2) else 1.0)
    neg = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        neg += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            neg += 1
    return neg


def _dense_negatives(w, n):
    # inertia of a small dense symmetric matrix by Bunch-Parlett LDL^T;
    # ``w`` is a list of row lists and is destroyed
    neg = 0
    k = 0
    while k < n:
        mu0 = 0.0
        r0 = s0 = k
        mu1 = 0.0
        r1 = k
        for i in range(k, n):
            row = w[i]
            a = abs(row[i])
            if a > mu1:
                mu1 = a
                r1 = i
            for j in range(i + 1, n):
                a = abs(row[j])
                if a > mu0:
                    mu0 = a
                    r0, s0 = i, j
        if mu0 == 0.0 and mu1 == 0.0:
            break
        if mu1 >= _BUNCH_ALPHA * mu0:
            _swap(w, n, k, r1)
            p = w[k][k]
            if p < 0:
                neg += 1
            rowk = w[k]
            for i in range(k + 1, n):
                f = w[i][k] / p
                if f != 0.0:
                    rowi = w[i]
                    for j in range(k + 1, n):
                        rowi[j] -= f * rowk[j]
            k += 1
        else:
            _swap(w, n, k, r0)
            _swap(w, n, k + 1, s0)
            a, b, c = w[k][k], w[k][k + 1], w[k + 1][k + 1]
            det = a * c - b * b
            if det < 0:
                neg += 1
            elif a + c < 0:
                neg += 2
            for i in range(k + 2, n):
                ui, vi = w[i][k], w[i][k + 1]
                # [ui vi] E^{-1}
                fi = (c * ui - b * vi) / det
                gi = (a * vi - b * ui) / det
                rowi = w[i]
                for j in range(k + 2, n):
                    rowi[j] -= fi * w[k][j] + gi * w[k + 1][j]
            k += 2
    return neg


def _swap(w, n, i, j):
    if i == j:
        return
    w[i], w[j] = w[j], w[i]
    for row in w:
        row[i], row[j] = row[j], row[i]


def dense_negatives(m):
    """Count of negative eigenvalues of a symmetric matrix (inertia)."""
    m = np.asarray(m, dtype=float)
    return _dense_negatives([list(r) for r in m], m.shape[0])


def arrow_count(base, chain_vertex, chain_ptr, chain_d, chain_e2, x):
    """Eigenvalue count below ``x`` for a dense block with pendant chains.

    Chain ``c`` occupies ``chain_d[chain_ptr[c]:chain_ptr[c + 1]]``;
    ``chain_e2[chain_ptr[c]]`` is the squared bridge to base vertex
    ``chain_vertex[c]`` and ``chain_e2[i]`` for later ``i`` couples chain
    entries ``i - 1`` and ``i``.
    """
    n = base.shape[0]
    e2max = max(1.0, float(np.max(chain_e2)) if len(chain_e2) else 1.0)
    pivmin = _SAFEMIN * e2max
    corr = [0.0] * n
    neg = 0
    for c in range(len(chain_vertex)):
        s, e = chain_ptr[c], chain_ptr[c + 1]
        if e == s:
            continue
        q = chain_d[e - 1] - x
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            neg += 1
        for i in range(e - 2, s - 1, -1):
            q = chain_d[i] - x - chain_e2[i + 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0:
                neg += 1
        corr[chain_vertex[c]] -= chain_e2[s] / q
    if n:
        w = [list(r) for r in base]
        for i in range(n):
            w[i][i] += corr[i] - x
        neg += _dense_negatives(w, n)
    return neg


def _bisect(count, lower, upper, lo, hi):
    scale = max(abs(lower), abs(upper), _SAFEMIN)
    out = np.empty(hi - lo)
    uppers = [upper] * (hi - lo)
    a_prev = lower
    for k in range(lo, hi):
        a, b = a_prev, uppers[k - lo]
        for _ in range(200):
            if b - a <= 2.0 * _EPS * max(abs(a), abs(b)) + _EPS * scale:
                break
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            c = count(mid)
            if c >= k + 1:
                b = mid
                for j in range(k + 1, min(c, hi)):
                    if mid < uppers[j - lo]:
                        uppers[j - lo] = mid
            else:
                a = mid
        out[k - lo] = 0.5 * (a + b)
        a_prev = a
    return out


def tridiag_eigvals(d, e2, lo, hi, lower, upper):
    """Eigenvalues with ascending indices ``lo <= k < hi`` by Sturm bisection."""
    return _bisect(lambda x: tridiag_count(d, e2, x), lower, upper, lo, hi)


def arrow_eigvals(base, chain_vertex, chain_ptr, chain_d, chain_e2, lo, hi, lower, upper):
    """Eigenvalues ``lo <= k < hi`` of the arrow-structured matrix."""
    return _bisect(
        lambda x: arrow_count(base, chain_vertex, chain_ptr, chain_d, chain_e2, x),
        lower,
        upper,
        lo,
        hi,
    )


def jacobi_eigvals(a, max_sweeps=100):
    """Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.empty(0)
    total = math.sqrt(float(np.sum(a * a)))
    if total == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off <= _EPS * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(apq) <= 1e-150 * abs(h):
                    t = apq / h  # small-angle limit, avoids overflow in theta**2
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a))
