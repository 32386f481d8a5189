"""Closed-form means, uncertainties and trajectories for displaced squeezed states.

Position decomposes as ``x = conj(xi) J- + xi J+ + x_c`` with
``x_c = i (xi conj(C) - conj(xi) C)``; momentum is its tau-derivative.
Squeezing replaces ``(conj(xi), xi)`` by the ladder coefficients
``X- = conj(xi) cosh r + xi e^{-i theta} sinh r`` and ``X+ = conj(X-)``.
"""
from dataclasses import dataclass, asdict
import math

import numpy as np

from .errors import NumericError
from .squeeze import DisplacementParam, Ordering, SqueezeParam


def _z(z):
    return z if isinstance(z, SqueezeParam) else SqueezeParam(complex(z))


def _a(alpha):
    return alpha.alpha if isinstance(alpha, DisplacementParam) else complex(alpha)


@dataclass(frozen=True)
class LadderCoefficients:
    X_minus: complex
    X_plus: complex
    X_0: complex
    Y_0: complex
    X_minus_dot: complex
    X_plus_dot: complex
    X_0_dot: complex
    Y_0_dot: complex


def _drive_terms(basis, bundle, tau):
    xi, xid, C = basis.xi(tau), basis.xi_dot(tau), bundle.C(tau)
    xc = 1j * (xi * np.conj(C) - np.conj(xi) * C)
    xc_dot = 1j * (xid * np.conj(C) - np.conj(xid) * C)
    return xi, xid, xc, xc_dot


def ladder_coefficients(basis, bundle, alpha, z, tau):
    """All ladder coefficients at ``tau`` (vectorized in ``tau``)."""
    a = _a(alpha)
    sq = _z(z)
    ch, sh = math.cosh(sq.r), math.sinh(sq.r)
    ph = np.exp(-1j * sq.theta)
    xi, xid, xc, xcd = _drive_terms(basis, bundle, tau)
    xm = np.conj(xi) * ch + xi * ph * sh
    xmd = np.conj(xid) * ch + xid * ph * sh
    xp, xpd = np.conj(xm), np.conj(xmd)
    x0 = a * np.conj(xi) + np.conj(a) * xi + xc
    x0d = a * np.conj(xid) + np.conj(a) * xid + xcd
    y0 = a * xm + np.conj(a) * xp + xc
    y0d = a * xmd + np.conj(a) * xpd + xcd
    return LadderCoefficients(xm, xp, x0, y0, xmd, xpd, x0d, y0d)


def mean_x(basis, bundle, alpha, z, tau, ordering=Ordering.ALPHA_Z):
    lc = ladder_coefficients(basis, bundle, alpha, z, tau)
    v = lc.X_0 if Ordering(ordering) is Ordering.ALPHA_Z else lc.Y_0
    return np.real(v)


def mean_p(basis, bundle, alpha, z, tau, ordering=Ordering.ALPHA_Z):
    lc = ladder_coefficients(basis, bundle, alpha, z, tau)
    v = lc.X_0_dot if Ordering(ordering) is Ordering.ALPHA_Z else lc.Y_0_dot
    return np.real(v)


def alpha_from_initial(x0, p0, basis, bundle):
    """Displacement giving ``<x(0)> = x0``, ``<p(0)> = p0`` for ``D(alpha) S(z)|0>``."""
    xi0 = complex(basis.xi(0.0))
    xid0 = complex(basis.xi_dot(0.0))
    return 1j * (p0 * xi0 - x0 * xid0) + 1j * bundle.c_zero


def alpha_from_initial_z_alpha(x0, p0, z, basis, bundle):
    """Displacement giving the same initial means for ``S(z) D(alpha)|0>``.

    Solves ``alpha cosh r + conj(alpha) e^{i theta} sinh r = beta`` with
    ``beta`` the displacement of the other ordering.
    """
    sq = _z(z)
    beta = alpha_from_initial(x0, p0, basis, bundle)
    return beta * math.cosh(sq.r) - np.conj(beta) * np.exp(1j * sq.theta) * math.sinh(sq.r)


def mean_x_initial(x0, p0, basis, bundle, tau):
    """``<x(tau)>`` written through the initial means (either ordering)."""
    xi, xi0 = basis.xi(tau), complex(basis.xi(0.0))
    xid0 = complex(basis.xi_dot(0.0))
    c = bundle.c(tau)
    v = (1j * ((np.conj(xi) * xi0 - xi * np.conj(xi0)) * p0
               + (xi * np.conj(xid0) - np.conj(xi) * xid0) * x0)
         + 1j * (xi * np.conj(c) - np.conj(xi) * c))
    return np.real(v)


def mean_p_initial(x0, p0, basis, bundle, tau):
    """``<p(tau)>`` through the initial means, including the ``x0`` term."""
    xid, xi0 = basis.xi_dot(tau), complex(basis.xi(0.0))
    xid0 = complex(basis.xi_dot(0.0))
    c = bundle.c(tau)
    v = (1j * ((np.conj(xid) * xi0 - xid * np.conj(xi0)) * p0
               + (xid * np.conj(xid0) - np.conj(xid) * xid0) * x0)
         + 1j * (xid * np.conj(c) - np.conj(xid) * c))
    return np.real(v)


def _check_variance(v, name):
    if not np.all(np.isfinite(v)):
        raise NumericError(f"non-finite {name} variance")
    if np.any(np.real(v) < -1e-12):
        raise NumericError(f"negative {name} variance {np.min(np.real(v)):.3e}")
    return np.maximum(np.real(v), 0.0)


def variances(basis, z, tau):
    """``(Delta x^2, Delta p^2)`` from ``X+ X-`` and ``X+' X-'``."""
    sq = _z(z)
    xi, xid = basis.xi(tau), basis.xi_dot(tau)
    c2, s2 = math.cosh(2 * sq.r), math.sinh(2 * sq.r)
    e = np.exp(1j * sq.theta)
    vx = np.abs(xi) ** 2 * c2 + np.real(np.conj(xi) ** 2 * e) * s2
    vp = np.abs(xid) ** 2 * c2 + np.real(np.conj(xid) ** 2 * e) * s2
    return _check_variance(vx, "position"), _check_variance(vp, "momentum")


def uncertainties(basis, z, tau):
    """``(Delta x, Delta p, Delta x Delta p)``; independent of ordering and alpha."""
    vx, vp = variances(basis, z, tau)
    dx, dp = np.sqrt(vx), np.sqrt(vp)
    return dx, dp, dx * dp


def product_squared_complex(basis, z, tau):
    """Expanded complex form of ``X+ X- X+' X-'`` with the cross term added."""
    sq = _z(z)
    xi, xid = basis.xi(tau), basis.xi_dot(tau)
    xb, xdb = np.conj(xi), np.conj(xid)
    e = np.exp(1j * sq.theta)
    c2, s2 = math.cosh(2 * sq.r), math.sinh(2 * sq.r)
    s = xi * xdb + xid * xb
    out = (xi * xb * xid * xdb * c2**2
           + 0.25 * (xb**2 * e + xi**2 / e) * (xdb**2 * e + xid**2 / e) * s2**2
           + 0.5 * (xb * xdb * s * e + xi * xid * s / e) * c2 * s2)
    return np.real(out)


def product_squared_real(basis, z, tau):
    """Uncertainty product squared in terms of chi1, chi2 and their derivatives."""
    sq = _z(z)
    y = basis.state(tau)
    A = y[0] * y[1] + y[2] * y[3]
    B = y[0] * y[1] - y[2] * y[3]
    Cc = y[0] * y[3] + y[1] * y[2]
    r, th = sq.r, sq.theta
    s2 = math.sinh(2 * r)
    return (0.25 * (1 + A**2)
            + 0.125 * ((1 + 3 * A**2) + (B**2 - Cc**2) * math.cos(2 * th)
                       + 2 * B * Cc * math.sin(2 * th)) * s2**2
            + 0.25 * A * (B * math.cos(th) + Cc * math.sin(th)) * math.sinh(4 * r))


def coherent_product_squared(basis, tau):
    """``(1 + (chi1 chi1' + chi2 chi2')^2) / 4``: the unsqueezed product squared."""
    y = basis.state(tau)
    A = y[0] * y[1] + y[2] * y[3]
    return 0.25 * (1 + A**2)


@dataclass(frozen=True)
class TrajectoryRecord:
    tau: float
    mean_x: float
    mean_p: float
    delta_x: float
    delta_p: float
    product: float

    def as_row(self):
        return [self.tau, self.mean_x, self.mean_p, self.delta_x, self.delta_p, self.product]

    def to_dict(self):
        return asdict(self)


def resolve_alpha(x0, p0, z, ordering, basis, bundle):
    if Ordering(ordering) is Ordering.ALPHA_Z:
        return alpha_from_initial(x0, p0, basis, bundle)
    return alpha_from_initial_z_alpha(x0, p0, z, basis, bundle)


def trajectory(basis, bundle, alpha, z, tau_grid, ordering=Ordering.ALPHA_Z):
    """One record per time for the state ``(alpha, z)`` in the given ordering."""
    t = np.asarray(tau_grid, dtype=float)
    if t.ndim != 1 or (t.size > 1 and np.any(np.diff(t) <= 0)):
        raise ValueError("tau_grid must be a strictly ascending 1-D array")
    mx = mean_x(basis, bundle, alpha, z, t, ordering)
    mp = mean_p(basis, bundle, alpha, z, t, ordering)
    dx, dp, prod = uncertainties(basis, z, t)
    return [TrajectoryRecord(float(a), float(b), float(c), float(d), float(e), float(f))
            for a, b, c, d, e, f in zip(t, mx, mp, dx, dp, prod)]


def trajectory_from_initial(basis, bundle, x0, p0, z, tau_grid, ordering=Ordering.ALPHA_Z):
    alpha = resolve_alpha(x0, p0, z, ordering, basis, bundle)
    return trajectory(basis, bundle, alpha, z, tau_grid, ordering)
