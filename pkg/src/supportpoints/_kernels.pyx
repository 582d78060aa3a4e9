# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False, nonecheck=False
"""Compiled distance-sum kernels.

Every kernel parallelizes over the rows of ``x`` only.  Each row is reduced
sequentially by a single thread, so results are bit-identical for any
thread count.
"""

from cython.parallel cimport prange
from libc.math cimport sqrt, INFINITY


def cross_row_sums(const double[:, ::1] x, const double[:, ::1] y,
                   double[::1] out, int threads=1):
    """out[i] = sum_m ||x_i - y_m||."""
    cdef Py_ssize_t n = x.shape[0], big_n = y.shape[0], p = x.shape[1]
    cdef Py_ssize_t i, m, k
    cdef double acc, d2, t
    for i in prange(n, nogil=True, num_threads=threads, schedule='static'):
        acc = 0.0
        for m in range(big_n):
            d2 = 0.0
            for k in range(p):
                t = x[i, k] - y[m, k]
                d2 = d2 + t * t
            acc = acc + sqrt(d2)
        out[i] = acc


def sweep(const double[:, ::1] x, const double[:, ::1] y, double eps,
          double[:, ::1] wy, double[::1] w, long[::1] eta,
          double[:, ::1] rep, double[::1] cross, double[::1] selfsum,
          double[::1] mind, int threads=1):
    """One pass of all per-point sums needed by the majorization maps.

    For each row i of ``x`` this fills

    * ``w[i]``      sum of 1/||x_i - y_m|| over m with distance > eps
    * ``wy[i]``     the matching weighted sum of y_m
    * ``eta[i]``    number of y_m within eps of x_i (dropped terms)
    * ``rep[i]``    sum over j != i of unit vectors (x_i - x_j)/||x_i - x_j||,
                    skipping exact coincidences
    * ``cross[i]``  sum_m ||x_i - y_m||
    * ``selfsum[i]`` sum_j ||x_i - x_j||
    * ``mind[i]``   min over j != i of ||x_i - x_j||
    """
    cdef Py_ssize_t n = x.shape[0], big_n = y.shape[0], p = x.shape[1]
    cdef Py_ssize_t i, j, m, k
    cdef double d2, d, t, inv, wacc, cacc, sacc, dmin
    cdef long cnt
    for i in prange(n, nogil=True, num_threads=threads, schedule='static'):
        for k in range(p):
            wy[i, k] = 0.0
            rep[i, k] = 0.0
        wacc = 0.0
        cacc = 0.0
        cnt = 0
        for m in range(big_n):
            d2 = 0.0
            for k in range(p):
                t = x[i, k] - y[m, k]
                d2 = d2 + t * t
            d = sqrt(d2)
            cacc = cacc + d
            if d > eps:
                inv = 1.0 / d
                wacc = wacc + inv
                for k in range(p):
                    wy[i, k] = wy[i, k] + inv * y[m, k]
            else:
                cnt = cnt + 1
        sacc = 0.0
        dmin = INFINITY
        for j in range(n):
            if j == i:
                continue
            d2 = 0.0
            for k in range(p):
                t = x[i, k] - x[j, k]
                d2 = d2 + t * t
            d = sqrt(d2)
            sacc = sacc + d
            if d < dmin:
                dmin = d
            if d > 0.0:
                inv = 1.0 / d
                for k in range(p):
                    rep[i, k] = rep[i, k] + inv * (x[i, k] - x[j, k])
        w[i] = wacc
        eta[i] = cnt
        cross[i] = cacc
        selfsum[i] = sacc
        mind[i] = dmin
