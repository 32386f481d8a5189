"""Complex fields sampled on uniform (x, tau) grids with central differences.

A field is stored as an envelope ``u`` times an optional analytic carrier
``exp(i S)``, ``S = a2(tau) x^2 + a1(tau) x``. Derivatives act on the full
field but are computed covariantly on the envelope, so strongly chirped
states stay resolvable on moderate grids. Boundary samples of each
difference become NaN and are skipped by norms.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class Carrier:
    """Quadratic phase ``a2 x^2 + a1 x`` with its tau-derivatives, per tau slice."""

    a2: np.ndarray
    a1: np.ndarray
    a2_dot: np.ndarray
    a1_dot: np.ndarray

    def phase(self, X):
        return self.a2[None, :] * X**2 + self.a1[None, :] * X


def _same_carrier(a, b):
    if a is b:
        return True
    if a is None or b is None:
        return False
    return all(np.array_equal(getattr(a, k), getattr(b, k))
               for k in ("a2", "a1", "a2_dot", "a1_dot"))


class FieldGrid:
    """Values on ``x_grid x tau_grid`` (x-major: ``values[i, j] = f(x_i, tau_j)``)."""

    def __init__(self, x_grid, tau_grid, values, carrier=None):
        x = np.asarray(x_grid, dtype=float)
        t = np.asarray(tau_grid, dtype=float)
        v = np.asarray(values, dtype=complex)
        if v.shape != (x.size, t.size):
            raise ConfigurationError(f"values shape {v.shape} != ({x.size}, {t.size})")
        for g, name in ((x, "x"), (t, "tau")):
            if g.size >= 2:
                d = np.diff(g)
                if np.any(d <= 0) or np.ptp(d) > 1e-9 * abs(d[0]) + 1e-15:
                    raise ConfigurationError(f"{name} grid must be uniform and ascending")
        self.x = x
        self.tau = t
        self.values = v
        self.carrier = carrier

    @classmethod
    def from_function(cls, f, x_grid, tau_grid, carrier=None):
        """Sample ``f(X, T)``; with a carrier ``f`` must return the envelope."""
        X, T = np.meshgrid(np.asarray(x_grid, float), np.asarray(tau_grid, float),
                           indexing="ij")
        return cls(x_grid, tau_grid, f(X, T), carrier)

    @property
    def X(self):
        return np.broadcast_to(self.x[:, None], self.values.shape)

    @property
    def T(self):
        return np.broadcast_to(self.tau[None, :], self.values.shape)

    @property
    def hx(self):
        return self.x[1] - self.x[0]

    @property
    def ht(self):
        return self.tau[1] - self.tau[0]

    def require_min_points(self, n=5):
        if self.x.size < n or self.tau.size < n:
            raise ConfigurationError(
                f"grid too coarse: need >= {n} points per axis, got "
                f"{self.x.size} x {self.tau.size}")

    def full_values(self):
        """Field values including the carrier phase."""
        if self.carrier is None:
            return self.values
        return self.values * np.exp(1j * self.carrier.phase(self.X))

    def like(self, values):
        return FieldGrid(self.x, self.tau, values, self.carrier)

    # raw envelope differences
    def _ux(self):
        u = self.values
        out = np.full_like(u, np.nan)
        out[1:-1] = (u[2:] - u[:-2]) / (2 * self.hx)
        return out

    def _uxx(self):
        u = self.values
        out = np.full_like(u, np.nan)
        out[1:-1] = (u[2:] - 2 * u[1:-1] + u[:-2]) / self.hx**2
        return out

    def _ut(self):
        u = self.values
        out = np.full_like(u, np.nan)
        out[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2 * self.ht)
        return out

    def dx(self):
        out = self._ux()
        if self.carrier is not None:
            c = self.carrier
            sx = 2 * c.a2[None, :] * self.X + c.a1[None, :]
            out = out + 1j * sx * self.values
        return self.like(out)

    def dxx(self):
        out = self._uxx()
        if self.carrier is not None:
            c = self.carrier
            sx = 2 * c.a2[None, :] * self.X + c.a1[None, :]
            sxx = 2 * c.a2[None, :]
            out = out + 2j * sx * self._ux() + (1j * sxx - sx**2) * self.values
        return self.like(out)

    def dt(self):
        out = self._ut()
        if self.carrier is not None:
            c = self.carrier
            st = c.a2_dot[None, :] * self.X**2 + c.a1_dot[None, :] * self.X
            out = out + 1j * st * self.values
        return self.like(out)

    # arithmetic on envelopes sharing one carrier
    def _compatible(self, other):
        same_grid = (other.values.shape == self.values.shape
                     and np.array_equal(other.x, self.x) and np.array_equal(other.tau, self.tau))
        if not same_grid or not _same_carrier(self.carrier, other.carrier):
            raise ConfigurationError("fields must share grid and carrier")

    def __add__(self, other):
        if isinstance(other, FieldGrid):
            self._compatible(other)
            return self.like(self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FieldGrid):
            self._compatible(other)
            return self.like(self.values - other.values)
        return NotImplemented

    def __mul__(self, scalar):
        return self.like(self.values * scalar)

    __rmul__ = __mul__

    def scale(self, coefficient):
        """Pointwise multiplication by an array broadcastable to the grid."""
        return self.like(self.values * coefficient)

    def valid_mask(self):
        return np.isfinite(self.values)

    def norm(self, values=None, mask=None):
        v = self.values if values is None else values
        m = np.isfinite(v) if mask is None else mask
        return float(np.sqrt(np.sum(np.abs(v[m]) ** 2) * self.hx))

    def relative_norm(self, residual):
        """``||residual|| / ||self||`` over points where the residual is valid."""
        r = residual.values if isinstance(residual, FieldGrid) else residual
        mask = np.isfinite(r)
        if not mask.any():
            raise ConfigurationError("no valid interior points left")
        ref = self.norm(self.values, mask)
        if ref == 0:
            raise ConfigurationError("field vanishes on the valid interior")
        return self.norm(r, mask) / ref

    def inner(self, other, mask=None):
        """``<self, other>`` per tau slice over the common valid rows (same carrier)."""
        self._compatible(other)
        prod = np.conj(self.values) * other.values
        m = np.isfinite(prod) if mask is None else mask
        prod = np.where(m, prod, 0)
        return prod.sum(axis=0) * self.hx
