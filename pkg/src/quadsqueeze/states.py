"""Number-operator eigenfunctions Psi_m(x, tau) and their grids.

The canonical evaluation is

    Psi_m = phi3^{-1/4} h_m(w) exp(i (a2 x^2 + a1 x + a0)),
    w = x / sqrt(phi3) - b3(tau),

with ``h_m`` the normalized Hermite function, ``a2 = phi3'/(4 phi3)``,
``a1 = E3/phi3`` and ``a0`` collecting the Lambda-integral, ``G0`` and the
continuously unwrapped argument of xi. :func:`psi_m_factored` evaluates
the same state through the separated product (R-factor, psi_m(zeta),
Xi_m(eta)) and serves as a cross-check.
"""
from dataclasses import dataclass
import csv
import io
import json
import math

import numpy as np

from . import _kernels
from .errors import CapacityError, ConfigurationError
from .fieldgrid import Carrier, FieldGrid

HERMITE_MAX = 512


@dataclass(frozen=True)
class SeparableCoords:
    zeta: np.ndarray
    eta: np.ndarray


@dataclass(frozen=True)
class NumberState:
    m: int
    basis: object
    bundle: object

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ConfigurationError("m must be a non-negative integer")
        if self.m > HERMITE_MAX:
            raise CapacityError(f"m={self.m} exceeds the Hermite limit {HERMITE_MAX}")


def hermite(m, u, max_order=HERMITE_MAX):
    """Physicists' Hermite polynomial ``H_m(u)`` by three-term recurrence."""
    if int(m) != m or m < 0:
        raise ConfigurationError("m must be a non-negative integer")
    if m > max_order:
        raise CapacityError(f"m={m} exceeds max_order={max_order}")
    out = _kernels.hermite_poly(int(m), np.asarray(u, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def separable_coords(x, tau, bundle):
    """``zeta = x/sqrt(phi3) - B3``, ``eta = tau``."""
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    return SeparableCoords(x / np.sqrt(bundle.phi3(tau)) - bundle.B3(tau), tau.copy())


def r_factor(x, tau, bundle, basis=None):
    """Real phase ``R(x, tau)`` of the separated form; vanishes at tau = 0."""
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    p3 = bundle.phi3(tau)
    sq = np.sqrt(p3)
    quad_part = 0.25 * x**2 * (bundle.phi3_dot(tau) - bundle.phi3_dot_0) / p3
    lin = (x / sq) * (bundle.E3(tau) / sq - bundle.theta2 + bundle.theta1 * bundle.B3(tau))
    out = quad_part + lin
    return float(out) if out.ndim == 0 else out


def _carrier_coeffs(bundle, tau):
    p3 = bundle.phi3(tau)
    p3d = bundle.phi3_dot(tau)
    e3 = bundle.E3(tau)
    a2 = 0.25 * p3d / p3
    a1 = e3 / p3
    a2_dot = 0.25 * (bundle.phi3_ddot(tau) * p3 - p3d**2) / p3**2
    a1_dot = (bundle.E3_dot(tau) * p3 - e3 * p3d) / p3**2
    return a2, a1, a2_dot, a1_dot


def _base_phase(bundle, tau):
    """Phase shared by all m, excluding the ``-m arg(xi)`` term."""
    arg = bundle.basis.arg_xi(tau)
    arg0 = float(bundle.basis.arg_xi(0.0))
    return -bundle.lambda_integral(tau) - bundle.G0(tau) - 0.5 * (arg - arg0), arg


def _per_time(tau, fn):
    """Evaluate ``fn`` once per distinct time and broadcast back."""
    tau = np.asarray(tau, dtype=float)
    uniq, inv = np.unique(tau, return_inverse=True)
    vals = fn(uniq)
    return tuple(np.asarray(v)[inv].reshape(tau.shape) for v in vals)


def _envelope(m, x, tau, bundle):
    def parts(t):
        base, arg = _base_phase(bundle, t)
        return bundle.phi3(t), bundle.b3(t), base - m * arg
    p3, b3, phase = _per_time(tau, parts)
    w = x / np.sqrt(p3) - b3
    h = _kernels.hermite_function(int(m), w)
    return p3**-0.25 * h * np.exp(1j * phase)


def psi_m(state, x, tau):
    """Complex value of Psi_m; ``x`` and ``tau`` broadcast."""
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    bundle = state.bundle
    a2, a1 = _per_time(tau, lambda t: _carrier_coeffs(bundle, t)[:2])
    out = _envelope(state.m, x, tau, bundle) * np.exp(1j * (a2 * x**2 + a1 * x))
    return complex(out) if out.ndim == 0 else out


def psi_m_factored(state, x, tau):
    """Psi_m from the separated product ``e^{iR} psi_m(zeta) Xi_m(eta)``.

    Uses the normalized ground-state constant ``exp(-b3(0)^2/2)`` and the
    phase convention ``Xi_m(0) = 1``.
    """
    m = state.m
    bundle = state.bundle
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    b0 = bundle.b3_0
    p30 = bundle.phi3_0
    zeta = separable_coords(x, tau, bundle).zeta
    u = zeta - b0
    # psi_m(zeta); the Hermite factor and Gaussian are combined in log form
    # so large |zeta| does not overflow
    hm = _kernels.hermite_poly(m, u)
    gauss = -0.5 * (1 - 1j * bundle.theta1) * zeta**2 + (b0 + 1j * bundle.theta2) * zeta
    psi = hm * (math.pi * p30) ** -0.25 * np.exp(gauss - 0.5 * b0**2)
    arg = bundle.basis.arg_xi(tau)
    arg0 = float(bundle.basis.arg_xi(0.0))
    xi_part = ((p30 / bundle.phi3(tau)) ** 0.25
               * np.exp(-1j * (m + 0.5) * (arg - arg0))
               * np.exp(-1j * (bundle.Lambda3(tau) + bundle.G0(tau))))
    pref = (2.0**m * math.factorial(m)) ** -0.5 * np.exp(-1j * m * arg0)
    out = pref * np.exp(1j * r_factor(x, tau, bundle)) * psi * xi_part
    return complex(out) if out.ndim == 0 else out


@dataclass
class WavefunctionGrid:
    """Samples of a wavefunction at one time on an ascending x grid."""

    x_grid: np.ndarray
    tau: float
    values: np.ndarray

    def __post_init__(self):
        self.x_grid = np.asarray(self.x_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.x_grid.shape != self.values.shape or self.x_grid.ndim != 1:
            raise ConfigurationError("x_grid and values must be 1-D of equal length")
        if self.x_grid.size > 1 and not np.all(np.diff(self.x_grid) > 0):
            raise ConfigurationError("x_grid must be strictly ascending")

    @property
    def density(self):
        return np.abs(self.values) ** 2

    def norm2(self):
        return float(np.trapezoid(self.density, self.x_grid))

    def moments(self):
        """``(<x>, Delta x)`` of the normalized density by the trapezoid rule."""
        rho = self.density
        n = np.trapezoid(rho, self.x_grid)
        mean = np.trapezoid(self.x_grid * rho, self.x_grid) / n
        var = np.trapezoid((self.x_grid - mean) ** 2 * rho, self.x_grid) / n
        return float(mean), float(math.sqrt(var))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "re_psi", "im_psi", "abs_psi_sq"])
        for x, v in zip(self.x_grid, self.values):
            w.writerow(["%.17g" % x, "%.17g" % v.real, "%.17g" % v.imag,
                        "%.17g" % (abs(v) ** 2)])
        return buf.getvalue()

    def to_dict(self):
        return {"tau": float(self.tau), "x": [float(x) for x in self.x_grid],
                "re": [float(v.real) for v in self.values],
                "im": [float(v.imag) for v in self.values]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["x"]), float(d["tau"]), np.array(d["re"]) + 1j * np.array(d["im"]))


def psi_m_grid(state, x_grid, tau):
    x = np.asarray(x_grid, dtype=float)
    return WavefunctionGrid(x, float(tau), psi_m(state, x, float(tau)))


def number_state_field(state, x_grid, tau_grid):
    """Psi_m on a space-time grid, stored as envelope times analytic carrier."""
    x = np.asarray(x_grid, dtype=float)
    t = np.asarray(tau_grid, dtype=float)
    b = state.bundle
    a2, a1, a2d, a1d = _carrier_coeffs(b, t)
    p3 = b.phi3(t)
    base, arg = _base_phase(b, t)
    w = x[:, None] / np.sqrt(p3)[None, :] - b.b3(t)[None, :]
    h = _kernels.hermite_function(int(state.m), w)
    env = h * (p3**-0.25 * np.exp(1j * (base - state.m * arg)))[None, :]
    return FieldGrid(x, t, env, Carrier(a2, a1, a2d, a1d))


def state_carrier(bundle, tau_grid):
    """The quadratic phase shared by all number states at these times."""
    return Carrier(*_carrier_coeffs(bundle, np.asarray(tau_grid, dtype=float)))


def expansion_envelope(coeffs, x, tau, bundle):
    """``sum_m c_m Psi_m`` with the carrier removed, via one Hermite recurrence."""
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    p3 = bundle.phi3(tau)
    w = x / np.sqrt(p3) - bundle.b3(tau)
    base, arg = _base_phase(bundle, tau)
    coeffs = np.asarray(coeffs, dtype=complex)
    if np.ndim(tau) == 0 or np.ptp(tau) == 0:
        a = float(np.ravel(arg)[0])
        c = coeffs * np.exp(-1j * np.arange(coeffs.size) * a)
        series = _kernels.hermite_series(c, w)
    else:
        series = np.empty(w.shape, dtype=complex)
        for idx in np.ndindex(w.shape):
            c = coeffs * np.exp(-1j * np.arange(coeffs.size) * arg[idx])
            series[idx] = _kernels.hermite_series(c, np.array([w[idx]]))[0]
    return p3**-0.25 * series * np.exp(1j * base)


def superposition_values(coeffs, x, tau, bundle):
    x, tau = np.broadcast_arrays(np.asarray(x, float), np.asarray(tau, float))
    a2, a1 = _per_time(tau, lambda t: _carrier_coeffs(bundle, t)[:2])
    return expansion_envelope(coeffs, x, tau, bundle) * np.exp(1j * (a2 * x**2 + a1 * x))
