# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled displacement-operator kernels.

Matrix elements <m|D(alpha)|n> are generated from the associated Laguerre
closed form, running the three-term recurrence in the polynomial degree with
the factorial/exponential prefactor folded in so nothing overflows.  The
recurrence over the column index (a^dagger - alpha^*) is NOT used: it is
unstable once |alpha| exceeds about 2.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, lgamma, log, sqrt

cnp.import_array()


cdef void _fill(double complex alpha, Py_ssize_t dim, double complex[:, ::1] out) noexcept nogil:
    cdef double x = alpha.real * alpha.real + alpha.imag * alpha.imag
    cdef double r = sqrt(x)
    cdef double complex u, pp, pm, neg_uc
    cdef double p0, ell, ell_prev, ell_next, s_n, s_prev
    cdef Py_ssize_t k, n

    if r > 0.0:
        u = alpha / r
    else:
        u = 1.0
    neg_uc = -u.conjugate()
    pp = 1.0
    pm = 1.0
    for k in range(dim):
        if r > 0.0:
            p0 = exp(k * log(r) - 0.5 * lgamma(k + 1.0) - 0.5 * x)
        elif k == 0:
            p0 = 1.0
        else:
            p0 = 0.0
        ell_prev = 0.0
        ell = p0
        s_prev = 0.0
        for n in range(dim - k):
            out[n + k, n] = ell * pp
            if k > 0:
                out[n, n + k] = ell * pm
            s_n = sqrt((n + 1.0) / (n + k + 1.0))
            ell_next = s_n * ((2.0 * n + 1.0 + k - x) * ell - (n + k) * s_prev * ell_prev) / (n + 1.0)
            ell_prev = ell
            ell = ell_next
            s_prev = s_n
        pp = pp * u
        pm = pm * neg_uc


def displacement_matrix(double complex alpha, Py_ssize_t cutoff):
    out = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    cdef double complex[:, ::1] view = out
    with nogil:
        _fill(alpha, cutoff + 1, view)
    return out


def displacement_trace(matrix, alphas):
    """out[k] = Tr[matrix @ D(alphas[k])]."""
    cdef const double complex[:, ::1] m = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef const double complex[::1] a = np.ascontiguousarray(np.ravel(alphas), dtype=np.complex128)
    cdef Py_ssize_t dim = m.shape[0]
    cdef Py_ssize_t npts = a.shape[0]
    result = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] res = result
    buf = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] d = buf
    cdef Py_ssize_t p, i, j
    cdef double complex acc
    with nogil:
        for p in range(npts):
            _fill(a[p], dim, d)
            acc = 0.0
            for i in range(dim):
                for j in range(dim):
                    acc = acc + m[i, j] * d[j, i]
            res[p] = acc
    return result.reshape(np.shape(alphas))


def displacement_accumulate(alphas, weights, Py_ssize_t cutoff):
    """Return sum_k weights[k] * D(alphas[k]) as a (cutoff+1)^2 matrix."""
    cdef const double complex[::1] a = np.ascontiguousarray(np.ravel(alphas), dtype=np.complex128)
    cdef const double complex[::1] w = np.ascontiguousarray(np.ravel(weights), dtype=np.complex128)
    cdef Py_ssize_t dim = cutoff + 1
    cdef Py_ssize_t npts = a.shape[0]
    if w.shape[0] != npts:
        raise ValueError("alphas and weights must have the same size")
    result = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] res = result
    buf = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] d = buf
    cdef Py_ssize_t p, i, j
    cdef double complex wp
    with nogil:
        for p in range(npts):
            wp = w[p]
            if wp == 0.0:
                continue
            _fill(a[p], dim, d)
            for i in range(dim):
                for j in range(dim):
                    res[i, j] = res[i, j] + wp * d[i, j]
    return result
