# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: quadratic-phase sampling, stencil derivatives,
deterministic pairwise reduction.  Mirrors `_reference.py`."""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, sin

cnp.import_array()


def quad_phase_samples(points, quad, lin, double damping=0.0,
                       double complex scale=1.0 + 0.0j):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t q = pts.shape[1]
    out_arr = np.empty(n, dtype=np.complex128)
    if q == 0:
        out_arr[:] = scale
        return out_arr

    cdef const double[:, ::1] p = pts
    cdef const double[:, ::1] m = np.ascontiguousarray(quad, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(lin, dtype=np.float64)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, a, c
    cdef double ph, r2, acc, x, amp
    cdef bint damped = damping != 0.0

    for i in range(n):
        ph = 0.0
        r2 = 0.0
        for a in range(q):
            x = p[i, a]
            ph += x * b[a]
            r2 += x * x
            acc = 0.0
            for c in range(q):
                acc += m[a, c] * p[i, c]
            ph -= 0.5 * x * acc
        amp = exp(-damping * r2) if damped else 1.0
        out[i] = scale * (amp * cos(ph) + 1j * (amp * sin(ph)))
    return out_arr


def stencil_lastaxis(values, double spacing, int order):
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef Py_ssize_t rows = arr.shape[0]
    cdef Py_ssize_t n = arr.shape[1]
    if (order == 2 and n < 3) or (order == 4 and n < 5):
        raise ValueError("too few samples for the stencil order")
    if order not in (2, 4):
        raise ValueError(f"unsupported stencil order {order}")
    out_arr = np.empty_like(arr)
    cdef const double complex[:, ::1] f = arr
    cdef double complex[:, ::1] d = out_arr
    cdef Py_ssize_t i, j
    cdef double h = spacing

    if order == 2:
        for i in range(rows):
            d[i, 0] = (-3.0 * f[i, 0] + 4.0 * f[i, 1] - f[i, 2]) / (2.0 * h)
            for j in range(1, n - 1):
                d[i, j] = (f[i, j + 1] - f[i, j - 1]) / (2.0 * h)
            d[i, n - 1] = (3.0 * f[i, n - 1] - 4.0 * f[i, n - 2] + f[i, n - 3]) / (2.0 * h)
    else:
        for i in range(rows):
            d[i, 0] = (-25.0 * f[i, 0] + 48.0 * f[i, 1] - 36.0 * f[i, 2]
                       + 16.0 * f[i, 3] - 3.0 * f[i, 4]) / (12.0 * h)
            d[i, 1] = (-3.0 * f[i, 0] - 10.0 * f[i, 1] + 18.0 * f[i, 2]
                       - 6.0 * f[i, 3] + f[i, 4]) / (12.0 * h)
            for j in range(2, n - 2):
                d[i, j] = (f[i, j - 2] - 8.0 * f[i, j - 1]
                           + 8.0 * f[i, j + 1] - f[i, j + 2]) / (12.0 * h)
            d[i, n - 2] = (3.0 * f[i, n - 1] + 10.0 * f[i, n - 2] - 18.0 * f[i, n - 3]
                           + 6.0 * f[i, n - 4] - f[i, n - 5]) / (12.0 * h)
            d[i, n - 1] = (25.0 * f[i, n - 1] - 48.0 * f[i, n - 2] + 36.0 * f[i, n - 3]
                           - 16.0 * f[i, n - 4] + 3.0 * f[i, n - 5]) / (12.0 * h)
    return out_arr


cdef double complex _pairwise(const double complex[::1] v, Py_ssize_t lo, Py_ssize_t n):
    cdef double complex s = 0.0
    cdef Py_ssize_t i, half
    if n <= 128:
        for i in range(lo, lo + n):
            s += v[i]
        return s
    half = n // 2
    return _pairwise(v, lo, half) + _pairwise(v, lo + half, n - half)


def pairwise_sum(values):
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double complex[::1] v = arr
    if arr.shape[0] == 0:
        return 0.0 + 0.0j
    return complex(_pairwise(v, 0, arr.shape[0]))
