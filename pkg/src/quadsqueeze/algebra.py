"""Space-time generators as finite-difference operators and their relations.

Generators act on :class:`~quadsqueeze.fieldgrid.FieldGrid` objects:

    J-  =  xi d_x - i x xi' + i C
    J+  = -conj(xi) d_x + i x conj(xi)' - i conj(C)      (adjoint of J-)
    M_k = i[phi_k d_tau + (phi_k'/2 x + E_k) d_x - (i/4) phi_k'' x^2
            - i x E_k' + phi_k'/4 + i D_k + i g0 phi_k]
    K-  = J-^2 / 2,  K+ = J+^2 / 2,  K3 = J+ J- + 1/2

Relations become relative residual norms over the valid interior.
"""
from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .fieldgrid import FieldGrid
from .potential import slice_potential


class GeneratorKind(Enum):
    J_MINUS = "J-"
    J_PLUS = "J+"
    IDENTITY = "I"
    M_MINUS = "M-"
    M_PLUS = "M+"
    M_3 = "M3"
    K_MINUS = "K-"
    K_PLUS = "K+"
    K_3 = "K3"


class Generators:
    """Binds a basis, bundle and potential so generators can be applied to fields."""

    def __init__(self, basis, bundle, spec=None):
        self.basis = basis
        self.bundle = bundle
        self.spec = basis.spec if spec is None else spec

    def _t(self, field, f):
        return np.asarray(f(field.tau))[None, :]

    def j_minus(self, field):
        xi = self._t(field, self.basis.xi)
        xid = self._t(field, self.basis.xi_dot)
        C = self._t(field, self.bundle.C)
        return field.dx().scale(xi) + field.scale(-1j * field.X * xid + 1j * C)

    def j_plus(self, field):
        xi = np.conj(self._t(field, self.basis.xi))
        xid = np.conj(self._t(field, self.basis.xi_dot))
        C = np.conj(self._t(field, self.bundle.C))
        return field.dx().scale(-xi) + field.scale(1j * field.X * xid - 1j * C)

    def _m(self, field, phi, phid, phidd, E, Ed, D):
        t = field.tau
        X = field.X
        g0 = np.asarray(self.spec.g0(t))[None, :]
        ph, phd, phdd = (np.asarray(f(t))[None, :] for f in (phi, phid, phidd))
        e, ed, d = (np.asarray(f(t))[None, :] for f in (E, Ed, D))
        out = (field.dt().scale(1j * ph)
               + field.dx().scale(1j * (0.5 * phd * X + e))
               + field.scale(1j * (-0.25j * phdd * X**2 - 1j * X * ed + 0.25 * phd
                                   + 1j * d + 1j * g0 * ph)))
        return out

    def m_minus(self, field):
        b = self.bundle
        return self._m(field, b.phi1, b.phi1_dot, b.phi1_ddot, b.E1, b.E1_dot, b.D1)

    def m_plus(self, field):
        b = self.bundle
        return self._m(field, b.phi2, b.phi2_dot, b.phi2_ddot, b.E2, b.E2_dot, b.D2)

    def m_3(self, field):
        b = self.bundle
        return self._m(field, b.phi3, b.phi3_dot, b.phi3_ddot, b.E3, b.E3_dot, b.D3)

    def schroedinger(self, field):
        V = slice_potential(self.spec, field)
        return field.dxx() + field.dt().scale(2j) + field.scale(-2.0 * V)

    def apply(self, kind, field):
        kind = GeneratorKind(kind)
        field.require_min_points(5)
        if kind is GeneratorKind.IDENTITY:
            return field.like(field.values.copy())
        if kind is GeneratorKind.J_MINUS:
            return self.j_minus(field)
        if kind is GeneratorKind.J_PLUS:
            return self.j_plus(field)
        if kind is GeneratorKind.M_MINUS:
            return self.m_minus(field)
        if kind is GeneratorKind.M_PLUS:
            return self.m_plus(field)
        if kind is GeneratorKind.M_3:
            return self.m_3(field)
        if kind is GeneratorKind.K_MINUS:
            return 0.5 * self.j_minus(self.j_minus(field))
        if kind is GeneratorKind.K_PLUS:
            return 0.5 * self.j_plus(self.j_plus(field))
        return self.j_plus(self.j_minus(field)) + 0.5 * field


def apply_generator(kind, field, basis, bundle, spec=None):
    """Apply one generator to ``field``; boundary samples become NaN."""
    return Generators(basis, bundle, spec).apply(kind, field)


def _combination(gens, expected, field):
    out = field.like(np.zeros_like(field.values))
    for kind, coeff in (expected or {}).items():
        out = out + coeff * gens.apply(kind, field)
    return out


def commutator_residual(a, b, expected, field, basis, bundle, spec=None):
    """``||([A, B] - sum_k c_k G_k) f|| / ||f||``; ``expected`` maps kinds to c_k."""
    gens = Generators(basis, bundle, spec)
    ab = gens.apply(a, gens.apply(b, field))
    ba = gens.apply(b, gens.apply(a, field))
    rhs = _combination(gens, expected, field)
    return field.relative_norm(ab - ba - rhs)


def eigen_residual(kind, eigenvalue, field, basis, bundle, spec=None):
    gens = Generators(basis, bundle, spec)
    return field.relative_norm(gens.apply(kind, field) - eigenvalue * field)


def m3_eigenvalue_residual(m, field, basis, bundle, spec=None):
    """``||M3 Psi_m - (m + 1/2) Psi_m|| / ||Psi_m||``."""
    return eigen_residual(GeneratorKind.M_3, m + 0.5, field, basis, bundle, spec)


def number_operator_residual(m, field, basis, bundle, spec=None):
    """``||J+ J- Psi_m - m Psi_m|| / ||Psi_m||``."""
    gens = Generators(basis, bundle, spec)
    out = gens.j_plus(gens.j_minus(field)) - m * field
    return field.relative_norm(out)


def casimir_identity_residual(field, basis, bundle, spec=None):
    """``||(M3 - phi3 S1/2 - J+ J- - 1/2) f|| / ||f||``."""
    gens = Generators(basis, bundle, spec)
    p3 = np.asarray(bundle.phi3(field.tau))[None, :]
    out = (gens.m_3(field) - gens.schroedinger(field).scale(0.5 * p3)
           - gens.j_plus(gens.j_minus(field)) - 0.5 * field)
    return field.relative_norm(out)


identity_II36_residual = casimir_identity_residual


def quadratic_identity_residual(kind, field, basis, bundle, spec=None):
    """Residual of ``M- = phi1 S1/2 - K-``, ``M+ = phi2 S1/2 - K+`` or ``M3 = phi3 S1/2 + K3``."""
    gens = Generators(basis, bundle, spec)
    kind = GeneratorKind(kind)
    table = {
        GeneratorKind.M_MINUS: (bundle.phi1, GeneratorKind.K_MINUS, -1.0),
        GeneratorKind.M_PLUS: (bundle.phi2, GeneratorKind.K_PLUS, -1.0),
        GeneratorKind.M_3: (bundle.phi3, GeneratorKind.K_3, 1.0),
    }
    if kind not in table:
        raise ConfigurationError("kind must be M-, M+ or M3")
    phi, k, sign = table[kind]
    ph = np.asarray(phi(field.tau))[None, :]
    out = (gens.apply(kind, field) - gens.schroedinger(field).scale(0.5 * ph)
           - sign * gens.apply(k, field))
    return field.relative_norm(out)


def ladder_norm_ratios(field, basis, bundle, spec=None):
    """``(||J+ f|| / ||f||, ||J- f|| / ||f||)`` over the valid interior."""
    gens = Generators(basis, bundle, spec)
    up = gens.j_plus(field)
    down = gens.j_minus(field)
    mask = np.isfinite(up.values) & np.isfinite(down.values)
    ref = field.norm(field.values, mask)
    return up.norm(up.values, mask) / ref, down.norm(down.values, mask) / ref


def hermiticity_residual(f, g, basis, bundle, spec=None):
    """``max_tau |<J+ f, g> - <f, J- g>| / (||f|| ||g||)`` for fields vanishing at the edges."""
    gens = Generators(basis, bundle, spec)
    jf = gens.j_plus(f)
    jg = gens.j_minus(g)
    mask = np.isfinite(jf.values) & np.isfinite(jg.values)
    lhs = jf.inner(g, mask)
    rhs = f.inner(jg, mask)
    scale = f.norm(f.values, mask) * g.norm(g.values, mask)
    return float(np.max(np.abs(lhs - rhs)) / scale)


# relations checked by the suite: (A, B, expected [A, B], tolerance tier)
COMMUTATION_TABLE = (
    ("J-", "J+", {"I": 1.0}, 1e-5),
    ("M+", "M-", {"M3": -1.0}, 1e-4),
    ("M3", "M+", {"M+": 2.0}, 1e-4),
    ("M3", "M-", {"M-": -2.0}, 1e-4),
    ("M3", "J-", {"J-": -1.0}, 1e-4),
    ("M3", "J+", {"J+": 1.0}, 1e-4),
    ("M-", "J+", {"J-": -1.0}, 1e-4),
    ("M+", "J-", {"J+": 1.0}, 1e-4),
    ("K+", "K-", {"K3": -1.0}, 1e-4),
    ("K3", "K+", {"K+": 2.0}, 1e-4),
    ("K3", "K-", {"K-": -2.0}, 1e-4),
    ("K-", "J-", {}, 1e-4),
    ("K+", "J-", {"J+": -1.0}, 1e-4),
    ("K3", "J-", {"J-": -1.0}, 1e-4),
    ("K-", "J+", {"J-": 1.0}, 1e-4),
    ("K+", "J+", {}, 1e-4),
    ("K3", "J+", {"J+": 1.0}, 1e-4),
    ("M3", "I", {}, 1e-12),
)


def parse_expected(expected):
    return {GeneratorKind(k): v for k, v in expected.items()}


def gaussian_test_field(x_grid, tau_grid, center, width, momentum, drift=0.3,
                        spread=0.2, frequency=0.7):
    """Moving, breathing Gaussian wave packet used as a generic smooth field."""
    def f(X, T):
        w = width * (1 + spread * T)
        return np.exp(-((X - center - drift * T) ** 2) / (2 * w**2)
                      + 1j * momentum * X - 1j * frequency * T)
    return FieldGrid.from_function(f, x_grid, tau_grid)


def uniform_grid(center, half_width, h):
    n = int(np.ceil(half_width / h))
    return center + h * np.arange(-n, n + 1)


def tau_slices(tau, dt, count=5):
    """``count`` uniform slices around ``tau``; starts at ``tau`` when too close to 0."""
    half = (count - 1) // 2
    start = max(tau - half * dt, 0.0)
    return start + dt * np.arange(count)


def convergence(residual_at, h, floor=1e-11):
    """Residuals at ``h`` and ``h/2`` and the observed order.

    Returns ``(coarse, fine, order)``; the order is ``inf`` when both sit
    below ``floor`` (nothing left to converge).
    """
    coarse = residual_at(h)
    fine = residual_at(h / 2)
    if coarse < floor and fine < floor:
        return coarse, fine, float("inf")
    return coarse, fine, float(np.log2(coarse / fine)) if fine > 0 else float("inf")
