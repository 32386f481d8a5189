"""Auxiliary tau-functions built from the classical basis and the linear drive.

All tau-derivatives are analytic (chain rule through xi, xi_dot and the
basis equation); integrals from 0 use adaptive Gauss-Legendre panels.
The constants of the linear-in-x generators are fixed so that only the
complex constant ``C0`` survives.
"""
import math

import numpy as np
from scipy.integrate import quad

from .errors import NumericError
from .quadrature import CumulativeIntegral


def _zero(tau):
    return np.zeros(np.shape(tau))


class AuxiliaryBundle:
    """Vectorized accessors for C, phi_k, E_k, D_k, b3, B3, G0, Lambda3."""

    def __init__(self, basis, spec, quad_tol=1e-12):
        self.basis = basis
        self.spec = spec
        self.quad_tol = quad_tol
        self.c_zero = complex(spec.c_zero)
        tmax = basis.tau_max
        bps = spec.breakpoints
        self._drive_free = spec.g1.is_constant and spec.g1.coefficients[0][0] == 0.0
        if self._drive_free:
            self._c = lambda t: np.zeros(np.shape(t), dtype=complex)
        else:
            self._c = CumulativeIntegral(lambda s: basis.xi(s) * spec.g1(s), 0.0, tmax,
                                         breakpoints=bps, tol=quad_tol)
        if spec.g0.is_constant:
            g0 = float(spec.g0.coefficients[0][0])
            self._G0 = lambda t: g0 * np.asarray(t, dtype=float)
        else:
            self._G0 = CumulativeIntegral(spec.g0, 0.0, tmax, breakpoints=bps, tol=quad_tol)
        if self._drive_free and self.c_zero == 0:
            self._lam = _zero
        else:
            self._lam = CumulativeIntegral(self._lambda_integrand, 0.0, tmax,
                                           breakpoints=bps, tol=quad_tol)
        self.phi3_0 = float(self.phi3(0.0))
        self.phi3_dot_0 = float(self.phi3_dot(0.0))
        self.E3_0 = float(self.E3(0.0))
        self.b3_0 = float(self.b3(0.0))
        self.theta1 = 0.5 * self.phi3_dot_0
        self.theta2 = self.E3_0 / math.sqrt(self.phi3_0)

    @property
    def tau_max(self):
        return self.basis.tau_max

    # drive integrals
    def c(self, tau):
        return self._c(tau)

    def C(self, tau):
        return self._c(tau) + self.c_zero

    def C_dot(self, tau):
        return self.basis.xi(tau) * self.spec.g1(tau)

    # quadratic coefficients
    def phi1(self, tau):
        return self.basis.xi(tau) ** 2

    def phi2(self, tau):
        return np.conj(self.basis.xi(tau)) ** 2

    def phi3(self, tau):
        return self.basis.phi3(tau)

    def phi1_dot(self, tau):
        return 2 * self.basis.xi(tau) * self.basis.xi_dot(tau)

    def phi2_dot(self, tau):
        return np.conj(self.phi1_dot(tau))

    def phi3_dot(self, tau):
        y = self.basis.state(tau)
        return 2 * (y[0] * y[1] + y[2] * y[3])

    def phi1_ddot(self, tau):
        x, xd = self.basis.xi(tau), self.basis.xi_dot(tau)
        return 2 * xd**2 - 4 * self.spec.g2(tau) * x**2

    def phi2_ddot(self, tau):
        return np.conj(self.phi1_ddot(tau))

    def phi3_ddot(self, tau):
        y = self.basis.state(tau)
        return -4 * self.spec.g2(tau) * (y[0] ** 2 + y[2] ** 2) + 2 * (y[1] ** 2 + y[3] ** 2)

    # linear coefficients
    def E1(self, tau):
        return -self.basis.xi(tau) * self.C(tau)

    def E2(self, tau):
        return np.conj(self.E1(tau))

    def E3(self, tau):
        return -2 * np.real(np.conj(self.basis.xi(tau)) * self.C(tau))

    def E1_dot(self, tau):
        return -self.basis.xi_dot(tau) * self.C(tau) - self.spec.g1(tau) * self.phi1(tau)

    def E2_dot(self, tau):
        return np.conj(self.E1_dot(tau))

    def E3_dot(self, tau):
        xd, C = self.basis.xi_dot(tau), self.C(tau)
        return -2 * np.real(np.conj(xd) * C) - self.spec.g1(tau) * self.phi3(tau)

    def E3_complex(self, tau):
        """``-(xi conj(C) + conj(xi) C)`` without taking the real part."""
        x, C = self.basis.xi(tau), self.C(tau)
        return -(x * np.conj(C) + np.conj(x) * C)

    # constants
    def D1(self, tau):
        return -0.5 * self.C(tau) ** 2

    def D2(self, tau):
        return np.conj(self.D1(tau))

    def D3(self, tau):
        return -np.abs(self.C(tau)) ** 2

    # separable-coordinate shift
    def b3(self, tau):
        x, C = self.basis.xi(tau), self.C(tau)
        return 2 * np.imag(np.conj(x) * C) / np.sqrt(self.phi3(tau))

    def b3_complex(self, tau):
        """``i (xi conj(C) - conj(xi) C) / sqrt(phi3)`` without taking the real part."""
        x, C = self.basis.xi(tau), self.C(tau)
        return 1j * (x * np.conj(C) - np.conj(x) * C) / np.sqrt(self.phi3(tau))

    def b3_dot(self, tau):
        """Chain-rule derivative of ``b3``; the drive terms cancel."""
        xd, C = self.basis.xi_dot(tau), self.C(tau)
        p3 = self.phi3(tau)
        num = np.real(1j * (xd * np.conj(C) - np.conj(xd) * C))
        return num / np.sqrt(p3) - 0.5 * self.phi3_dot(tau) / p3 * self.b3(tau)

    def B3(self, tau):
        return self.b3(tau) - self.b3_0

    def G0(self, tau):
        return self._G0(tau)

    def _lambda_integrand(self, s):
        p3 = self.phi3(s)
        return (self.E3(s) / p3) ** 2 + self.D3(s) / p3

    def lambda_integral(self, tau):
        """``int_0^tau (E3^2/phi3^2 + D3/phi3)``."""
        return self._lam(tau)

    def Lambda3(self, tau):
        B = self.B3(tau)
        return self.lambda_integral(tau) - B * (self.theta2 - 0.25 * self.phi3_dot_0 * B)


def build_bundle(basis, spec=None, quad_tol=1e-12):
    """Assemble the auxiliary functions for ``basis`` (defaults to its own spec)."""
    return AuxiliaryBundle(basis, basis.spec if spec is None else spec, quad_tol)


def formula_I_residuals(bundle, tau):
    """Residuals of the b3-derivative identity in its two consistent forms.

    Returns ``(first, second)``:
    ``|phi3'/2 b3 + E3/sqrt(phi3) - i sqrt(phi3)(xi' conj(C) - conj(xi') C)|``
    and ``|E3/sqrt(phi3) - phi3 b3'|`` with ``b3'`` from the chain rule.
    """
    b = bundle.basis
    xd, C = b.xi_dot(tau), bundle.C(tau)
    p3 = bundle.phi3(tau)
    rhs = 1j * np.sqrt(p3) * (xd * np.conj(C) - np.conj(xd) * C)
    lhs = 0.5 * bundle.phi3_dot(tau) * bundle.b3(tau) + bundle.E3(tau) / np.sqrt(p3)
    first = np.abs(lhs - rhs)
    second = np.abs(bundle.E3(tau) / np.sqrt(p3) - p3 * bundle.b3_dot(tau))
    return first, second


def formula_I_unit_rhs_residual(bundle, tau):
    """Diagnostic only: ``|phi3'/2 b3 + phi3 b3' - i/sqrt(phi3)|``.

    The right side drops the drive factor, so this does not vanish in
    general; it is reported, never asserted.
    """
    p3 = bundle.phi3(tau)
    lhs = 0.5 * bundle.phi3_dot(tau) * bundle.b3(tau) + p3 * bundle.b3_dot(tau)
    return np.abs(lhs - 1j / np.sqrt(p3))


def check_formula_I(bundle, basis=None, tau=0.0):
    first, second = formula_I_residuals(bundle, tau)
    return np.maximum(first, second)


def check_formula_II(bundle, basis=None, spec=None, tau=0.0):
    """``|phi3''/phi3 - phi3'^2/(2 phi3^2) + 4 g2 - 2/phi3^2|``.

    ``phi3''`` follows from the equation of motion the basis actually
    obeys; ``g2`` on the right comes from ``spec``. A mismatched ``spec``
    therefore shows up as a nonzero residual.
    """
    spec = bundle.spec if spec is None else spec
    p3 = bundle.phi3(tau)
    p3d = bundle.phi3_dot(tau)
    lhs = bundle.phi3_ddot(tau) / p3 - 0.5 * p3d**2 / p3**2
    return np.abs(lhs - (-4 * spec.g2(tau) + 2 / p3**2))


def check_formula_III(bundle, basis=None, spec=None, tau=0.0):
    """``|2 E3'/phi3 - phi3' E3/phi3^2 + 2 g1 + 2 b3/phi3^{3/2}|``.

    ``E3'`` uses the drive the bundle was built with; ``g1`` on the right
    comes from ``spec``.
    """
    spec = bundle.spec if spec is None else spec
    p3 = bundle.phi3(tau)
    lhs = 2 * bundle.E3_dot(tau) / p3 - bundle.phi3_dot(tau) * bundle.E3(tau) / p3**2
    return np.abs(lhs - (-2 * spec.g1(tau) - 2 * bundle.b3(tau) / p3**1.5))


def check_formula_IV(bundle, tau, quad_tol=1e-11):
    """``|int_0^tau E3/phi3^{3/2} - (b3(tau) - b3(0))|`` by brute-force quadrature."""
    tau = float(tau)
    if tau == 0.0:
        return 0.0
    points = [p for p in bundle.spec.breakpoints if 0 < p < tau] or None
    f = lambda s: float(bundle.E3(s) / bundle.phi3(s) ** 1.5)
    val, err = quad(f, 0.0, tau, epsabs=quad_tol, epsrel=quad_tol, limit=500,
                    points=points)
    if not np.isfinite(val) or err > 100 * max(quad_tol, quad_tol * abs(val)):
        raise NumericError(f"quadrature failed on [0, {tau}] (error estimate {err:.2e})",
                           interval=(0.0, tau))
    return abs(val - float(bundle.B3(tau)))
