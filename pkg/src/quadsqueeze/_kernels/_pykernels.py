"""Pure-NumPy implementations of the inner loops.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature; this module is the reference and the import-time fallback.
"""
import math

import numpy as np

_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)
_PI_QUARTER = math.pi ** -0.25


def hermite_poly(m, u):
    """Physicists' Hermite polynomial H_m(u) by three-term recurrence."""
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if m == 0:
        return h_prev
    h = 2.0 * u
    for k in range(1, m):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    return h


def _hermite_walk(nmax, w, visit):
    # normalized recurrence with per-point exponent tracking so the Gaussian
    # factor never underflows before the polynomial has grown
    w = np.asarray(w, dtype=float)
    log_scale = -0.5 * w * w
    h_prev = np.zeros_like(w)
    h = np.full_like(w, _PI_QUARTER)
    visit(0, h, log_scale)
    for k in range(nmax):
        h_next = math.sqrt(2.0 / (k + 1)) * w * h - math.sqrt(k / (k + 1)) * h_prev
        h_prev, h = h, h_next
        big = np.abs(h) > _RESCALE
        if big.any():
            h[big] /= _RESCALE
            h_prev[big] /= _RESCALE
            log_scale[big] += _LOG_RESCALE
            visit(-1, big, None)
        visit(k + 1, h, log_scale)


def hermite_functions(nmax, w):
    """Table of normalized Hermite functions h_0..h_nmax at points ``w``."""
    w = np.asarray(w, dtype=float)
    out = np.empty((nmax + 1,) + w.shape)

    def visit(k, h, log_scale):
        if k >= 0:
            out[k] = h * np.exp(log_scale)

    _hermite_walk(nmax, w, visit)
    return out


def hermite_function(m, w):
    w = np.asarray(w, dtype=float)
    last = {}

    def visit(k, h, log_scale):
        if k == m:
            last["v"] = h * np.exp(log_scale)

    _hermite_walk(m, w, visit)
    return last["v"]


def hermite_series(coeffs, w):
    """Sum_m coeffs[m] * h_m(w) without materializing the table."""
    coeffs = np.asarray(coeffs, dtype=complex)
    w = np.asarray(w, dtype=float)
    acc = np.zeros(w.shape, dtype=complex)
    state = {}

    def visit(k, h, log_scale):
        if k == -1:
            acc[h] /= _RESCALE
            return
        acc[...] += coeffs[k] * h
        state["log_scale"] = log_scale

    _hermite_walk(len(coeffs) - 1, w, visit)
    return acc * np.exp(state["log_scale"])


def squeeze_series(beta, gamma, nmax):
    """Coefficients of exp(gamma/2 J+^2) exp(beta J+) |0> in the number basis.

    Entry k is sum_n sqrt(k!) / j! * beta^j * (gamma/2)^(m-n) / (m-n)!
    with m = k // 2 and j = 2n + k % 2, accumulated in log-magnitude form
    with compensated summation.
    """
    beta = complex(beta)
    gamma = complex(gamma)
    log_b = math.log(abs(beta)) if beta != 0 else -math.inf
    log_g = math.log(abs(gamma) / 2.0) if gamma != 0 else -math.inf
    arg_b = math.atan2(beta.imag, beta.real)
    arg_g = math.atan2(gamma.imag, gamma.real)
    out = np.zeros(nmax + 1, dtype=complex)
    for k in range(nmax + 1):
        parity = k % 2
        m = k // 2
        half_lf = 0.5 * math.lgamma(k + 1)
        sr = si = cr = ci = 0.0
        for n in range(m + 1):
            j = 2 * n + parity
            p = m - n
            if (j and beta == 0) or (p and gamma == 0):
                continue
            logmag = half_lf - math.lgamma(j + 1) - math.lgamma(p + 1)
            if j:
                logmag += j * log_b
            if p:
                logmag += p * log_g
            mag = math.exp(logmag)
            ph = j * arg_b + p * arg_g
            tr = mag * math.cos(ph)
            ti = mag * math.sin(ph)
            y = tr - cr
            t = sr + y
            cr = (t - sr) - y
            sr = t
            y = ti - ci
            t = si + y
            ci = (t - si) - y
            si = t
        out[k] = complex(sr, si)
    return out
