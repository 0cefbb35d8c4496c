# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 kernels; same contracts as ``_pykernels``."""

import numpy as np
from libc.math cimport fabs, pow, sqrt, INFINITY


def hardy_recurrence(c, double r, double head):
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t n = cv.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double acc = head, one_minus = 1.0 - r
    for i in range(n):
        acc = r * acc + one_minus * cv[i]
        o[i] = acc
    return out


def suffix_sum(c, double tail, bint strict=True):
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t n = cv.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double acc = tail
    for i in range(n - 1, -1, -1):
        if strict:
            o[i] = acc
            acc += cv[i]
        else:
            acc += cv[i]
            o[i] = acc
    return out


def weighted_power_sum(c, double q, double ratio, double first):
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double total = 0.0, wk = first
    for i in range(cv.shape[0]):
        if cv[i] != 0.0:
            total += pow(fabs(cv[i]), q) * wk
        wk *= ratio
    return total


def cmo_window(c, sizes, double head_mass, double head_value, double q):
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(sizes, dtype=np.float64)
    cdef Py_ssize_t n = cv.shape[0], g, k
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double mass = head_mass, integral = head_mass * head_value, mu, acc
    for g in range(n):
        mass += sv[g]
        integral += cv[g] * sv[g]
        mu = integral / mass
        acc = head_mass * pow(fabs(head_value - mu), q) if head_mass > 0.0 else 0.0
        for k in range(g + 1):
            acc += pow(fabs(cv[k] - mu), q) * sv[k]
        o[g] = acc / mass
    return out


cdef void _apply(double[::1] x, double[::1] y, double lo_w, double lo_rho,
                 double hi_w, double hi_rho, double diag, bint transpose) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], i
    cdef double acc = 0.0
    if not transpose:
        for i in range(n):
            acc = lo_rho * acc + x[i]
            y[i] = lo_w * acc + diag * x[i]
        acc = 0.0
        for i in range(n - 1, -1, -1):
            y[i] += hi_w * acc
            acc = hi_rho * (acc + x[i])
    else:
        for i in range(n - 1, -1, -1):
            acc = lo_rho * acc + x[i]
            y[i] = lo_w * acc + diag * x[i]
        acc = 0.0
        for i in range(n):
            y[i] += hi_w * acc
            acc = hi_rho * (acc + x[i])


def toeplitz_apply(x, double lo_w, double lo_rho, double hi_w, double hi_rho,
                   double diag, bint transpose=False):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(xv.shape[0])
    _apply(xv, out, lo_w, lo_rho, hi_w, hi_rho, diag, transpose)
    return out


def power_iteration(x0, double lo_w, double lo_rho, double hi_w, double hi_rho,
                    double diag, int iters, double tol):
    v_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t n = v.shape[0], i
    sv_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] sv = sv_arr
    cdef double[::1] w = w_arr
    cdef double nrm = 0.0, lam, res, d, sigma = 0.0, residual = INFINITY
    cdef int steps = 0, it
    for i in range(n):
        nrm += v[i] * v[i]
    nrm = sqrt(nrm)
    for i in range(n):
        v[i] /= nrm
    with nogil:
        for it in range(1, iters + 1):
            steps = it
            _apply(v, sv, lo_w, lo_rho, hi_w, hi_rho, diag, False)
            _apply(sv, w, lo_w, lo_rho, hi_w, hi_rho, diag, True)
            lam = 0.0
            for i in range(n):
                lam += sv[i] * sv[i]
            sigma = sqrt(lam)
            res = 0.0
            nrm = 0.0
            for i in range(n):
                d = w[i] - lam * v[i]
                res += d * d
                nrm += w[i] * w[i]
            residual = sqrt(res) / lam
            nrm = sqrt(nrm)
            for i in range(n):
                v[i] = w[i] / nrm
            if residual < tol:
                break
    return sigma, residual, steps
