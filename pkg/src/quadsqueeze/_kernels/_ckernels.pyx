# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; signatures mirror ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, lgamma, cos, sin, atan2, fabs, M_PI, INFINITY

cnp.import_array()

cdef double _RESCALE = 1e150
cdef double _LOG_RESCALE = log(1e150)


def hermite_poly(int m, u):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t n = uu.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef double x, hp, h, hn
    cdef int k
    for i in range(n):
        x = uu[i]
        hp = 1.0
        if m == 0:
            out[i] = 1.0
            continue
        h = 2.0 * x
        for k in range(1, m):
            hn = 2.0 * x * h - 2.0 * k * hp
            hp = h
            h = hn
        out[i] = h
    return out.reshape(np.shape(u))


cdef inline void _walk_point(double x, int nmax, const double* ca, const double* cb,
                             double* row, Py_ssize_t stride, double complex* coeffs,
                             double complex* acc, int mode, int target,
                             double* single) nogil:
    # mode 0: fill table row[k*stride]; mode 1: accumulate series; mode 2: only h_target
    # ca[k] = sqrt(2/(k+1)), cb[k] = sqrt(k/(k+1)); scale = exp(log-scale) is
    # refreshed only when the recurrence is rescaled
    cdef double ls = -0.5 * x * x
    cdef double scale = exp(ls)
    cdef double hp = 0.0
    cdef double h = M_PI ** -0.25
    cdef double hn
    cdef double complex s = 0.0
    cdef int k
    if mode == 0:
        row[0] = h * scale
    elif mode == 1:
        s = coeffs[0] * h
    elif target == 0:
        single[0] = h * scale
        return
    for k in range(nmax):
        hn = ca[k] * x * h - cb[k] * hp
        hp = h
        h = hn
        if fabs(h) > _RESCALE:
            h /= _RESCALE
            hp /= _RESCALE
            ls += _LOG_RESCALE
            scale = exp(ls)
            if mode == 1:
                s /= _RESCALE
        if mode == 0:
            row[(k + 1) * stride] = h * scale
        elif mode == 1:
            s += coeffs[k + 1] * h
        elif k + 1 == target:
            single[0] = h * scale
            return
    if mode == 1:
        acc[0] = s * scale


cdef tuple _recurrence(int nmax):
    k = np.arange(max(nmax, 1), dtype=np.float64)
    return np.sqrt(2.0 / (k + 1)), np.sqrt(k / (k + 1))


def hermite_functions(int nmax, w):
    cdef cnp.ndarray[double, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ww.shape[0], i
    cdef cnp.ndarray[double, ndim=2] out = np.empty((nmax + 1, n))
    cdef cnp.ndarray[double, ndim=1] ca, cb
    ca, cb = _recurrence(nmax)
    cdef double* base = <double*> out.data
    with nogil:
        for i in range(n):
            _walk_point(ww[i], nmax, &ca[0], &cb[0], base + i, n, NULL, NULL, 0, 0, NULL)
    return out.reshape((nmax + 1,) + np.shape(w))


def hermite_function(int m, w):
    cdef cnp.ndarray[double, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ww.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] ca, cb
    ca, cb = _recurrence(m)
    cdef double* base = <double*> out.data
    with nogil:
        for i in range(n):
            _walk_point(ww[i], m, &ca[0], &cb[0], NULL, 0, NULL, NULL, 2, m, base + i)
    return out.reshape(np.shape(w))


def hermite_series(coeffs, w):
    cdef cnp.ndarray[double complex, ndim=1] cc = np.ascontiguousarray(coeffs, dtype=np.complex128).ravel()
    cdef cnp.ndarray[double, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ww.shape[0], i
    cdef int nmax = cc.shape[0] - 1
    cdef cnp.ndarray[double complex, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[double, ndim=1] ca, cb
    ca, cb = _recurrence(nmax)
    cdef double complex* cbase = <double complex*> cc.data
    cdef double complex* obase = <double complex*> out.data
    with nogil:
        for i in range(n):
            _walk_point(ww[i], nmax, &ca[0], &cb[0], NULL, 0, cbase, obase + i, 1, 0, NULL)
    return out.reshape(np.shape(w))


def squeeze_series(beta, gamma, int nmax):
    cdef double complex b = complex(beta)
    cdef double complex g = complex(gamma)
    cdef bint b_zero = b == 0
    cdef bint g_zero = g == 0
    cdef double log_b = log(abs(b)) if not b_zero else -INFINITY
    cdef double log_g = log(abs(g) / 2.0) if not g_zero else -INFINITY
    cdef double arg_b = atan2(b.imag, b.real)
    cdef double arg_g = atan2(g.imag, g.real)
    cdef cnp.ndarray[double complex, ndim=1] out = np.zeros(nmax + 1, dtype=np.complex128)
    cdef int k, n, m, j, p, parity
    cdef double half_lf, logmag, mag, ph, tr, ti, sr, si, cr, ci, y, t
    for k in range(nmax + 1):
        parity = k % 2
        m = k // 2
        half_lf = 0.5 * lgamma(k + 1.0)
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for n in range(m + 1):
            j = 2 * n + parity
            p = m - n
            if (j and b_zero) or (p and g_zero):
                continue
            logmag = half_lf - lgamma(j + 1.0) - lgamma(p + 1.0)
            if j:
                logmag += j * log_b
            if p:
                logmag += p * log_g
            mag = exp(logmag)
            ph = j * arg_b + p * arg_g
            tr = mag * cos(ph)
            ti = mag * sin(ph)
            y = tr - cr
            t = sr + y
            cr = (t - sr) - y
            sr = t
            y = ti - ci
            t = si + y
            ci = (t - si) - y
            si = t
        out[k] = sr + 1j * si
    return out
