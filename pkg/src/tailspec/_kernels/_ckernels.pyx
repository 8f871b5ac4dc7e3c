# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Sturm-count, inertia and rotation kernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, copysign
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double _EPS = np.finfo(float).eps
cdef double _SAFEMIN = np.finfo(float).tiny
cdef double _BUNCH_ALPHA = (1.0 + sqrt(17.0)) / 8.0


cdef Py_ssize_t _tridiag_count(const double[:] d, const double[:] e2, double x,
                               double pivmin) nogil:
    cdef Py_ssize_t n = d.shape[0], i, neg = 0
    cdef double q
    if n == 0:
        return 0
    q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        neg += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            neg += 1
    return neg


cdef double _pivmin(const double[:] e2):
    cdef double m = 1.0
    cdef Py_ssize_t i
    for i in range(e2.shape[0]):
        if e2[i] > m:
            m = e2[i]
    return _SAFEMIN * m


def tridiag_count(d, e2, double x):
    cdef const double[:] dv = np.ascontiguousarray(d, dtype=float)
    cdef const double[:] ev = np.ascontiguousarray(e2, dtype=float)
    return _tridiag_count(dv, ev, x, _pivmin(ev))


cdef inline void _swap(double* w, Py_ssize_t n, Py_ssize_t i, Py_ssize_t j) nogil:
    cdef Py_ssize_t k
    cdef double t
    if i == j:
        return
    for k in range(n):
        t = w[i * n + k]
        w[i * n + k] = w[j * n + k]
        w[j * n + k] = t
    for k in range(n):
        t = w[k * n + i]
        w[k * n + i] = w[k * n + j]
        w[k * n + j] = t


cdef Py_ssize_t _dense_negatives(double* w, Py_ssize_t n) nogil:
    cdef Py_ssize_t neg = 0, k = 0, i, j, r0, s0, r1
    cdef double mu0, mu1, a, b, c, det, p, f, ui, vi, fi, gi
    while k < n:
        mu0 = 0.0
        mu1 = 0.0
        r0 = k
        s0 = k
        r1 = k
        for i in range(k, n):
            a = fabs(w[i * n + i])
            if a > mu1:
                mu1 = a
                r1 = i
            for j in range(i + 1, n):
                a = fabs(w[i * n + j])
                if a > mu0:
                    mu0 = a
                    r0 = i
                    s0 = j
        if mu0 == 0.0 and mu1 == 0.0:
            break
        if mu1 >= _BUNCH_ALPHA * mu0:
            _swap(w, n, k, r1)
            p = w[k * n + k]
            if p < 0:
                neg += 1
            for i in range(k + 1, n):
                f = w[i * n + k] / p
                if f != 0.0:
                    for j in range(k + 1, n):
                        w[i * n + j] -= f * w[k * n + j]
            k += 1
        else:
            _swap(w, n, k, r0)
            _swap(w, n, k + 1, s0)
            a = w[k * n + k]
            b = w[k * n + k + 1]
            c = w[(k + 1) * n + k + 1]
            det = a * c - b * b
            if det < 0:
                neg += 1
            elif a + c < 0:
                neg += 2
            for i in range(k + 2, n):
                ui = w[i * n + k]
                vi = w[i * n + k + 1]
                fi = (c * ui - b * vi) / det
                gi = (a * vi - b * ui) / det
                for j in range(k + 2, n):
                    w[i * n + j] -= fi * w[k * n + j] + gi * w[(k + 1) * n + j]
            k += 2
    return neg


def dense_negatives(m):
    cdef double[:, ::1] mv = np.array(m, dtype=float, order="C")
    cdef Py_ssize_t n = mv.shape[0]
    if n == 0:
        return 0
    return _dense_negatives(&mv[0, 0], n)


cdef Py_ssize_t _arrow_count(const double[:, :] base, const long[:] cv, const long[:] cp,
                             const double[:] cd, const double[:] ce2, double x,
                             double pivmin, double* w, double* corr) nogil:
    cdef Py_ssize_t n = base.shape[0], nc = cv.shape[0]
    cdef Py_ssize_t c, i, j, s, e, neg = 0
    cdef double q
    for i in range(n):
        corr[i] = 0.0
    for c in range(nc):
        s = cp[c]
        e = cp[c + 1]
        if e == s:
            continue
        q = cd[e - 1] - x
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            neg += 1
        i = e - 2
        while i >= s:
            q = cd[i] - x - ce2[i + 1] / q
            if fabs(q) < pivmin:
                q = -pivmin
            if q < 0:
                neg += 1
            i -= 1
        corr[cv[c]] -= ce2[s] / q
    if n:
        for i in range(n):
            for j in range(n):
                w[i * n + j] = base[i, j]
            w[i * n + i] += corr[i] - x
        neg += _dense_negatives(w, n)
    return neg


def arrow_count(base, chain_vertex, chain_ptr, chain_d, chain_e2, double x):
    cdef const double[:, :] bv = np.ascontiguousarray(base, dtype=float)
    cdef const long[:] cv = np.ascontiguousarray(chain_vertex, dtype=np.int_)
    cdef const long[:] cp = np.ascontiguousarray(chain_ptr, dtype=np.int_)
    cdef const double[:] cd = np.ascontiguousarray(chain_d, dtype=float)
    cdef const double[:] ce = np.ascontiguousarray(chain_e2, dtype=float)
    cdef Py_ssize_t n = bv.shape[0]
    cdef double* w = <double*> malloc((n * n + n + 1) * sizeof(double))
    cdef Py_ssize_t r
    try:
        r = _arrow_count(bv, cv, cp, cd, ce, x, _pivmin(ce), w, w + n * n)
    finally:
        free(w)
    return r


cdef void _bisect_tridiag(const double[:] d, const double[:] e2, Py_ssize_t lo,
                          Py_ssize_t hi, double lower, double upper, double pivmin,
                          double[:] out, double[:] uppers) nogil:
    cdef Py_ssize_t k, j, c, it, top
    cdef double a, b, mid, a_prev = lower
    cdef double scale = fabs(lower) if fabs(lower) > fabs(upper) else fabs(upper)
    for k in range(hi - lo):
        uppers[k] = upper
    for k in range(lo, hi):
        a = a_prev
        b = uppers[k - lo]
        for it in range(200):
            if b - a <= 2.0 * _EPS * (fabs(a) if fabs(a) > fabs(b) else fabs(b)) + _EPS * scale:
                break
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            c = _tridiag_count(d, e2, mid, pivmin)
            if c >= k + 1:
                b = mid
                top = c if c < hi else hi
                for j in range(k + 1, top):
                    if mid < uppers[j - lo]:
                        uppers[j - lo] = mid
            else:
                a = mid
        out[k - lo] = 0.5 * (a + b)
        a_prev = a


def tridiag_eigvals(d, e2, Py_ssize_t lo, Py_ssize_t hi, double lower, double upper):
    cdef const double[:] dv = np.ascontiguousarray(d, dtype=float)
    cdef const double[:] ev = np.ascontiguousarray(e2, dtype=float)
    out = np.empty(hi - lo)
    uppers = np.empty(hi - lo)
    cdef double pm = _pivmin(ev)
    _bisect_tridiag(dv, ev, lo, hi, lower, upper, pm, out, uppers)
    return out


def arrow_eigvals(base, chain_vertex, chain_ptr, chain_d, chain_e2, Py_ssize_t lo,
                  Py_ssize_t hi, double lower, double upper):
    cdef const double[:, :] bv = np.ascontiguousarray(base, dtype=float)
    cdef const long[:] cv = np.ascontiguousarray(chain_vertex, dtype=np.int_)
    cdef const long[:] cp = np.ascontiguousarray(chain_ptr, dtype=np.int_)
    cdef const double[:] cd = np.ascontiguousarray(chain_d, dtype=float)
    cdef const double[:] ce = np.ascontiguousarray(chain_e2, dtype=float)
    cdef Py_ssize_t n = bv.shape[0], k, j, c, it, top
    cdef double pm = _pivmin(ce)
    cdef double a, b, mid, a_prev = lower
    cdef double scale = fabs(lower) if fabs(lower) > fabs(upper) else fabs(upper)
    out_arr = np.empty(hi - lo)
    up_arr = np.full(hi - lo, upper)
    cdef double[:] out = out_arr
    cdef double[:] uppers = up_arr
    cdef double* w = <double*> malloc((n * n + n + 1) * sizeof(double))
    try:
        for k in range(lo, hi):
            a = a_prev
            b = uppers[k - lo]
            for it in range(200):
                if b - a <= 2.0 * _EPS * (fabs(a) if fabs(a) > fabs(b) else fabs(b)) + _EPS * scale:
                    break
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                c = _arrow_count(bv, cv, cp, cd, ce, mid, pm, w, w + n * n)
                if c >= k + 1:
                    b = mid
                    top = c if c < hi else hi
                    for j in range(k + 1, top):
                        if mid < uppers[j - lo]:
                            uppers[j - lo] = mid
                else:
                    a = mid
            out[k - lo] = 0.5 * (a + b)
            a_prev = a
    finally:
        free(w)
    return out_arr


def jacobi_eigvals(a, int max_sweeps=100):
    cdef double[:, ::1] m = np.array(a, dtype=float, order="C")
    cdef Py_ssize_t n = m.shape[0], p, q, k, sweep
    cdef double total = 0.0, off, apq, h, theta, t, c, s, xp, xq
    if n == 0:
        return np.empty(0)
    for p in range(n):
        for q in range(n):
            total += m[p, q] * m[p, q]
    total = sqrt(total)
    if total == 0.0:
        return np.zeros(n)
    with nogil:
        for sweep in range(max_sweeps):
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += m[p, q] * m[p, q]
            if sqrt(off) <= _EPS * total:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = m[p, q]
                    if apq == 0.0:
                        continue
                    h = m[q, q] - m[p, p]
                    if fabs(apq) <= 1e-150 * fabs(h):
                        t = apq / h
                    else:
                        theta = h / (2.0 * apq)
                        t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        xp = m[k, p]
                        xq = m[k, q]
                        m[k, p] = c * xp - s * xq
                        m[k, q] = s * xp + c * xq
                    for k in range(n):
                        xp = m[p, k]
                        xq = m[q, k]
                        m[p, k] = c * xp - s * xq
                        m[q, k] = s * xp + c * xq
                    m[p, q] = 0.0
                    m[q, p] = 0.0
    return np.sort(np.asarray(m).diagonal().copy())
