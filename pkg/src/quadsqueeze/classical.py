"""Wronskian-normalized real and complex solutions of ``a'' + 2 g2(tau) a = 0``."""
import math
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigurationError, ConvergenceWarning, DomainError, NumericError
from .quadrature import CumulativeIntegral

SQRT2 = math.sqrt(2.0)
DRIFT_WARN = 1e-8


def default_initial_data(spec):
    s = spec.scale
    return (s, 0.0, 0.0, 1.0 / s)


class ClassicalBasis:
    """Real solutions chi1, chi2 with derivatives on ``[0, tau_max]``.

    Evaluation is vectorized; ``state(tau)`` returns the stacked array
    ``(chi1, chi1_dot, chi2, chi2_dot)``.
    """

    def __init__(self, spec, initial_data, tau_max, evaluator, closed_form, tol):
        self.spec = spec
        self.initial_data = tuple(float(v) for v in initial_data)
        self.tau_max = float(tau_max)
        self._eval = evaluator
        self.closed_form = closed_form
        self.tol = tol
        self._arg_integral = None

    @property
    def domain(self):
        return 0.0, self.tau_max

    def _check(self, tau):
        t = np.asarray(tau, dtype=float)
        if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > self.tau_max):
            raise DomainError(f"tau outside basis domain [0, {self.tau_max}]")
        return t

    def state(self, tau):
        t = self._check(tau)
        return self._eval(t)

    def chi(self, tau):
        y = self.state(tau)
        return y[0], y[2]

    def chi_dot(self, tau):
        y = self.state(tau)
        return y[1], y[3]

    def xi(self, tau):
        y = self.state(tau)
        return (y[0] + 1j * y[2]) / SQRT2

    def xi_dot(self, tau):
        y = self.state(tau)
        return (y[1] + 1j * y[3]) / SQRT2

    def xi_ddot(self, tau):
        return -2.0 * self.spec.g2(tau) * self.xi(tau)

    def wronskian(self, tau):
        y = self.state(tau)
        return y[0] * y[3] - y[1] * y[2]

    def phi3(self, tau):
        y = self.state(tau)
        return y[0] ** 2 + y[2] ** 2

    def arg_xi(self, tau):
        """Continuous argument of xi, accumulated from tau = 0.

        Uses ``d(arg xi)/dtau = 1/phi3`` to pick the branch, then snaps to
        the local ``atan2`` value so no quadrature error leaks in.
        """
        t = self._check(tau)
        if self._arg_integral is None:
            self._arg_integral = CumulativeIntegral(
                lambda s: 1.0 / self.phi3(s), 0.0, self.tau_max,
                breakpoints=self.spec.breakpoints, tol=1e-12)
        y = self._eval(t)
        local = np.arctan2(y[2], y[0])
        x1, _, x2, _ = self.initial_data
        guess = math.atan2(x2, x1) + self._arg_integral(t)
        return local + 2 * np.pi * np.round((guess - local) / (2 * np.pi))


def _closed_form(g2, initial_data):
    a1, v1, a2, v2 = initial_data
    a = np.array([a1, a2])[:, None]
    v = np.array([v1, v2])[:, None]
    if g2 == 0:
        def ev(t):
            t = np.atleast_1d(t).ravel()
            pos = a + v * t
            vel = np.broadcast_to(v, pos.shape)
            return pos, vel
    elif g2 > 0:
        w = math.sqrt(2 * g2)

        def ev(t):
            t = np.atleast_1d(t).ravel()
            c, s = np.cos(w * t), np.sin(w * t)
            return a * c + v / w * s, -a * w * s + v * c
    else:
        w = math.sqrt(-2 * g2)

        def ev(t):
            t = np.atleast_1d(t).ravel()
            c, s = np.cosh(w * t), np.sinh(w * t)
            return a * c + v / w * s, a * w * s + v * c
    return ev


def _pack(ev):
    def evaluator(t):
        shape = np.shape(t)
        pos, vel = ev(t)
        out = np.stack([pos[0], vel[0], pos[1], vel[1]])
        return out.reshape((4,) + shape)
    return evaluator


def solve_basis(spec, initial_data=None, tau_max=10.0, tol=1e-10, use_closed_form=True):
    """Build the classical basis for ``spec`` on ``[0, tau_max]``.

    Constant ``g2`` uses the exact trigonometric, hyperbolic or linear
    solution unless ``use_closed_form`` is False; otherwise DOP853 with
    dense output is run between the breakpoints of ``g2``. The unit
    Wronskian is monitored, not enforced.
    """
    if initial_data is None:
        initial_data = default_initial_data(spec)
    init = tuple(float(v) for v in initial_data)
    if len(init) != 4 or not all(math.isfinite(v) for v in init):
        raise ConfigurationError("initial data must be four finite reals")
    w0 = init[0] * init[3] - init[1] * init[2]
    if abs(w0 - 1.0) > 1e-12:
        raise ConfigurationError(f"initial Wronskian is {w0!r}, expected 1")
    if not (tau_max > 0 and math.isfinite(tau_max)):
        raise ConfigurationError("tau_max must be positive and finite")
    lo, hi = spec.domain
    if lo > 0 or hi < tau_max:
        raise DomainError(f"potential defined on [{lo}, {hi}], need [0, {tau_max}]")

    if use_closed_form and spec.g2.is_constant:
        g2 = float(spec.g2.coefficients[0][0])
        return ClassicalBasis(spec, init, tau_max, _pack(_closed_form(g2, init)), True, tol)

    edges = [0.0, *[b for b in spec.g2.interior_breakpoints if 0 < b < tau_max], tau_max]
    segments = []
    y0 = np.array([init[0], init[1], init[2], init[3]])

    def rhs(t, y):
        k = -2.0 * spec.g2(min(max(t, a), b))
        return np.array([y[1], k * y[0], y[3], k * y[2]])

    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (a, b), y0, method="DOP853", rtol=tol, atol=tol * 1e-2,
                        dense_output=True)
        if sol.status != 0:
            t_fail = float(sol.t[-1]) if sol.t.size else a
            raise NumericError(f"integrator failed near tau={t_fail}: {sol.message}",
                               tau=t_fail)
        segments.append(sol.sol)
        y0 = sol.y[:, -1]
    starts = np.array(edges[:-1])

    def evaluator(t):
        shape = np.shape(t)
        flat = np.atleast_1d(t).ravel()
        idx = np.clip(np.searchsorted(starts, flat, side="right") - 1, 0, len(segments) - 1)
        out = np.empty((4, flat.size))
        for k in np.unique(idx):
            sel = idx == k
            out[:, sel] = segments[k](flat[sel])
        return out.reshape((4,) + shape)

    basis = ClassicalBasis(spec, init, tau_max, evaluator, False, tol)
    drift = wronskian_drift(basis, 1000)
    if drift > DRIFT_WARN:
        warnings.warn(f"Wronskian drift {drift:.3e} exceeds {DRIFT_WARN:g}",
                      ConvergenceWarning, stacklevel=2)
    return basis


def xi(basis, tau):
    return basis.xi(tau)


def xi_dot(basis, tau):
    return basis.xi_dot(tau)


def wronskian_drift(basis, sample_count=1000):
    """``max |chi1 chi2' - chi1' chi2 - 1|`` over evenly spaced samples."""
    if sample_count < 2:
        raise ConfigurationError("sample_count must be at least 2")
    t = np.linspace(0.0, basis.tau_max, int(sample_count))
    return float(np.max(np.abs(basis.wronskian(t) - 1.0)))
