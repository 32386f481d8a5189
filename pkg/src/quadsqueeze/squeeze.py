"""Displacement and squeeze parameters, disentangled coordinates and number-basis expansions.

With ``S(z) = exp(g+ K+) exp(g3 K3) exp(g- K-)`` both orderings reduce to

    c_k = P * sum_n sqrt(k!) / j! * beta^j * (g+/2)^p / p!,
    j = 2n + k mod 2, p = k//2 - n,

where, for ``D(alpha) S(z)|0>``, ``beta = alpha - g+ conj(alpha)`` and
``P = exp((g3 - |alpha|^2 + g+ conj(alpha)^2)/2)``; for ``S(z) D(alpha)|0>``,
``beta = alpha e^{g3}`` and ``P = exp((g3 + alpha^2 g- - |alpha|^2)/2)``.
The double sum runs in log space with compensated accumulation.
"""
import cmath
from dataclasses import dataclass
from enum import Enum
import json
import math
import warnings

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ConvergenceWarning, NumericError
from .states import WavefunctionGrid, superposition_values

N_MAX = 1024


class Ordering(Enum):
    ALPHA_Z = "alpha_z"
    Z_ALPHA = "z_alpha"


@dataclass(frozen=True)
class DisplacementParam:
    alpha: complex

    @classmethod
    def from_polar(cls, modulus, delta):
        return cls(complex(cmath.rect(modulus, delta)))

    @property
    def modulus(self):
        return abs(self.alpha)

    @property
    def delta(self):
        return cmath.phase(self.alpha)


@dataclass(frozen=True)
class SqueezeParam:
    z: complex

    @classmethod
    def from_polar(cls, r, theta):
        if r < 0:
            raise ConfigurationError("squeeze modulus r must be non-negative")
        return cls(complex(cmath.rect(r, theta)))

    @property
    def r(self):
        return abs(self.z)

    @property
    def theta(self):
        """Argument in ``[0, 2 pi)``; zero for ``z = 0``."""
        t = cmath.phase(self.z)
        return t + 2 * math.pi if t < 0 else t


@dataclass(frozen=True)
class BchCoords:
    gamma_minus: complex
    gamma_plus: complex
    gamma_3: float


def bch(z):
    """Disentangled coordinates ``(g-, g+, g3)`` of ``exp(z K+ - conj(z) K-)``."""
    z = z.z if isinstance(z, SqueezeParam) else complex(z)
    r = abs(z)
    if r == 0:
        return BchCoords(0j, 0j, 0.0)
    t = math.tanh(r)
    unit = z / r
    # -log(cosh r) without overflow for large r
    g3 = -(r + math.log1p(math.exp(-2 * r)) - math.log(2.0))
    return BchCoords(-unit.conjugate() * t, unit * t, g3)


@dataclass
class NumberBasisExpansion:
    ordering: Ordering
    alpha: complex
    z: complex
    coefficients: np.ndarray
    tail_bound: float

    @property
    def N(self):
        return self.coefficients.size - 1

    def norm2(self):
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def to_dict(self):
        return {
            "ordering": self.ordering.value,
            "alpha": [self.alpha.real, self.alpha.imag],
            "z": [self.z.real, self.z.imag],
            "N": self.N,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "tail_bound": self.tail_bound,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        coeffs = np.array([complex(re, im) for re, im in d["coefficients"]])
        return cls(Ordering(d["ordering"]), complex(*d["alpha"]), complex(*d["z"]), coeffs,
                   float(d["tail_bound"]))


def _params(alpha, z, ordering):
    a = alpha.alpha if isinstance(alpha, DisplacementParam) else complex(alpha)
    zz = z.z if isinstance(z, SqueezeParam) else complex(z)
    g = bch(zz)
    if ordering is Ordering.ALPHA_Z:
        beta = a - g.gamma_plus * a.conjugate()
        log_pref = 0.5 * (g.gamma_3 - abs(a) ** 2 + g.gamma_plus * a.conjugate() ** 2)
    else:
        beta = a * math.exp(g.gamma_3)
        log_pref = 0.5 * (g.gamma_3 + a**2 * g.gamma_minus - abs(a) ** 2)
    return a, zz, beta, g.gamma_plus, log_pref


def _expand(alpha, z, N, ordering, tol):
    if int(N) != N or N < 1:
        raise ConfigurationError("N must be a positive integer")
    if N > N_MAX:
        raise ConfigurationError(f"N={N} exceeds N_MAX={N_MAX}")
    a, zz, beta, gp, log_pref = _params(alpha, z, ordering)
    raw = _kernels.squeeze_series(beta, gp, int(N))
    coeffs = raw * np.exp(log_pref)
    tail = abs(1.0 - float(np.sum(np.abs(coeffs) ** 2)))
    if tol is not None and tail > tol:
        needed = _needed_N(alpha, z, ordering, tol)
        warnings.warn(f"truncation tail {tail:.2e} > {tol:g}; need N >= {needed}",
                      ConvergenceWarning, stacklevel=3)
    return NumberBasisExpansion(ordering, a, zz, coeffs, tail)


def _needed_N(alpha, z, ordering, tol):
    n = 16
    while n <= N_MAX:
        a, zz, beta, gp, log_pref = _params(alpha, z, ordering)
        c = _kernels.squeeze_series(beta, gp, n) * np.exp(log_pref)
        if abs(1.0 - np.sum(np.abs(c) ** 2)) <= tol:
            return n
        n *= 2
    return None


def expand_alpha_z(alpha, z, N, tol=1e-6):
    """Coefficients of ``D(alpha) S(z)|0>`` on ``|0..N>``."""
    return _expand(alpha, z, N, Ordering.ALPHA_Z, tol)


def expand_z_alpha(alpha, z, N, tol=1e-6):
    """Coefficients of ``S(z) D(alpha)|0>`` on ``|0..N>``."""
    return _expand(alpha, z, N, Ordering.Z_ALPHA, tol)


def expand(alpha, z, N, ordering, tol=1e-6):
    return _expand(alpha, z, N, Ordering(ordering), tol)


def expand_adaptive(alpha, z, ordering, tol=1e-10, start=32, n_max=N_MAX):
    """Grow N by doubling until the norm deficit is below ``tol``.

    Raises NumericError if ``n_max`` is reached first.
    """
    ordering = Ordering(ordering)
    n = start
    while True:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            e = _expand(alpha, z, min(n, n_max), ordering, None)
        if e.tail_bound <= tol:
            return e
        if n >= n_max:
            raise NumericError(f"tail {e.tail_bound:.2e} > {tol:g} at N_max={n_max}")
        n *= 2


def tail_bound(expansion):
    return expansion.tail_bound


def assemble_wavefunction(expansion, x_grid, tau, bundle, max_tail=1e-6):
    """``sum_m c_m Psi_m(x, tau)`` on ``x_grid``."""
    if expansion.tail_bound > max_tail:
        raise NumericError(f"expansion tail {expansion.tail_bound:.2e} exceeds {max_tail:g}")
    x = np.asarray(x_grid, dtype=float)
    vals = superposition_values(expansion.coefficients, x, float(tau), bundle)
    return WavefunctionGrid(x, float(tau), vals)
