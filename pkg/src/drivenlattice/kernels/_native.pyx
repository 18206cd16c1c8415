# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Bessel-array kernels.

Contract identical to ``_fallback``: ascending power series for |x| <= 2,
Miller's backward recurrence (seeded 60 orders above max(nmax, |x|) and
normalized with J_0 + 2*sum J_{2k} = 1) otherwise.
"""

from libc.math cimport ceil, fabs, isfinite

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF SERIES_CUTOFF = 2.0
DEF START_MARGIN = 60
DEF BIG = 1e10
DEF SMALL = 1e-10


cdef void _series_fill(double[::1] out, Py_ssize_t nmax, double x) noexcept:
    cdef double half = x / 2.0
    cdef double quarter = half * half
    cdef double pref = 1.0
    cdef double term, acc
    cdef Py_ssize_t n, m
    for n in range(nmax + 1):
        if n > 0:
            pref *= half / n
            if pref == 0.0:
                # remaining orders underflow to zero at this argument
                for m in range(n, nmax + 1):
                    out[m] = 0.0
                return
        term = pref
        acc = term
        m = 0
        while True:
            m += 1
            term *= -quarter / (m * (n + m))
            acc += term
            if fabs(term) <= 1e-18 * (fabs(acc) + 1e-300):
                break
        out[n] = acc


cdef void _miller_fill(double[::1] out, Py_ssize_t nmax, double ax) noexcept:
    cdef Py_ssize_t start = nmax
    cdef Py_ssize_t cx = <Py_ssize_t>ceil(ax)
    if cx > start:
        start = cx
    start += START_MARGIN
    if start % 2:
        start += 1
    cdef double inv = 2.0 / ax
    cdef double jp = 0.0
    cdef double jc = 1.0
    cdef double jm, norm = 0.0
    cdef Py_ssize_t m, idx, j
    for m in range(start, 0, -1):
        jm = (m * inv) * jc - jp
        jp = jc
        jc = jm
        idx = m - 1
        if idx <= nmax:
            out[idx] = jc
        if idx == 0:
            norm += jc
        elif idx % 2 == 0:
            norm += 2.0 * jc
        if fabs(jc) > BIG:
            jc *= SMALL
            jp *= SMALL
            norm *= SMALL
            if idx <= nmax:
                for j in range(idx, nmax + 1):
                    out[j] *= SMALL
    for j in range(nmax + 1):
        out[j] /= norm


cdef void _fill(double[::1] out, Py_ssize_t nmax, double x) noexcept:
    cdef double ax = fabs(x)
    cdef Py_ssize_t j
    if ax == 0.0:
        out[0] = 1.0
        for j in range(1, nmax + 1):
            out[j] = 0.0
        return
    if ax <= SERIES_CUTOFF:
        _series_fill(out, nmax, ax)
    else:
        _miller_fill(out, nmax, ax)
    if x < 0.0:
        for j in range(1, nmax + 1, 2):
            out[j] = -out[j]


def jn_array(Py_ssize_t nmax, double x):
    """J_0(x)..J_nmax(x) as a 1-D array."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if not isfinite(x):
        raise ValueError("arguments must be finite")
    out = np.empty(nmax + 1, dtype=np.float64)
    _fill(out, nmax, x)
    return out


def jn_array_batch(Py_ssize_t nmax, xs):
    """J_0..J_nmax for each argument; shape (len(xs), nmax + 1)."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.atleast_1d(
        np.asarray(xs, dtype=np.float64)
    )
    if not np.all(np.isfinite(arr)):
        raise ValueError("arguments must be finite")
    cdef Py_ssize_t npts = arr.shape[0]
    out = np.empty((npts, nmax + 1), dtype=np.float64)
    cdef double[:, ::1] view = out
    cdef double[::1] row
    cdef Py_ssize_t i
    for i in range(npts):
        _fill(view[i], nmax, arr[i])
    return out
