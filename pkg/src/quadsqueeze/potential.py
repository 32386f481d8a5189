"""Quadratic potentials ``V(x, tau) = g2 x^2 + g1 x + g0`` and the Schroedinger residual."""
from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import ConfigurationError, DomainError

PRESETS = ("free", "harmonic", "repulsive", "linear", "driven", "custom")


class CoefficientFunction:
    """A real coefficient of tau, either constant or piecewise polynomial.

    Piecewise pieces hold ascending-power coefficients in absolute tau.
    At a breakpoint the right-hand piece is used; the final endpoint
    belongs to the last piece. Constant functions are defined on
    ``[0, inf)``.
    """

    def __init__(self, breakpoints=None, coefficients=None, constant=None):
        if constant is not None:
            if breakpoints is not None or coefficients is not None:
                raise ConfigurationError("give either a constant or a piecewise table")
            c = float(constant)
            if not math.isfinite(c):
                raise ConfigurationError("coefficient must be finite")
            self.breakpoints = np.array([0.0, np.inf])
            self.coefficients = [np.array([c])]
            return
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ConfigurationError("piecewise table needs at least two breakpoints")
        if not np.all(np.diff(bp) > 0):
            raise ConfigurationError("breakpoints must be strictly ascending")
        if bp[0] < 0:
            raise ConfigurationError("the time domain starts at tau = 0")
        coeffs = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coefficients]
        if len(coeffs) != bp.size - 1:
            raise ConfigurationError("need one coefficient list per piece")
        if any(c.size == 0 or not np.all(np.isfinite(c)) for c in coeffs):
            raise ConfigurationError("piece coefficients must be finite and non-empty")
        self.breakpoints = bp
        self.coefficients = coeffs

    @classmethod
    def constant(cls, value):
        return cls(constant=value)

    @property
    def is_constant(self):
        return len(self.coefficients) == 1 and self.coefficients[0].size == 1

    @property
    def domain(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def interior_breakpoints(self):
        return [float(b) for b in self.breakpoints[1:-1]]

    def _check(self, tau):
        lo, hi = self.domain
        if np.any(~np.isfinite(tau)) or np.any(tau < lo) or np.any(tau > hi):
            raise DomainError(f"tau outside coefficient domain [{lo}, {hi}]")

    def __call__(self, tau):
        t = np.asarray(tau, dtype=float)
        self._check(t)
        if len(self.coefficients) == 1:
            out = np.polynomial.polynomial.polyval(t, self.coefficients[0])
            return out + 0.0 * t if np.ndim(t) else float(out)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        idx = np.clip(idx, 0, len(self.coefficients) - 1)
        out = np.empty(np.shape(t))
        for k in np.unique(idx):
            sel = idx == k
            out[sel] = np.polynomial.polynomial.polyval(t[sel], self.coefficients[k])
        return out if np.ndim(t) else float(out)

    def to_dict(self):
        if self.is_constant and np.isinf(self.breakpoints[-1]):
            return {"constant": float(self.coefficients[0][0])}
        return {
            "breakpoints": [float(b) for b in self.breakpoints],
            "coefficients": [[float(c) for c in cs] for cs in self.coefficients],
        }

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, (int, float)):
            return cls(constant=d)
        if "constant" in d:
            return cls(constant=d["constant"])
        try:
            return cls(d["breakpoints"], d["coefficients"])
        except KeyError as exc:
            raise ConfigurationError(f"piecewise table missing key {exc}") from None


@dataclass(frozen=True)
class PotentialSpec:
    """Coefficients of ``g2 x^2 + g1 x + g0`` plus the complex constant ``C0``.

    ``scale`` sets the default initial data ``(s, 0, 0, 1/s)`` of the
    classical basis; presets pick ``s = 1/sqrt(omega)`` when an
    oscillator frequency is present.
    """

    g2: CoefficientFunction
    g1: CoefficientFunction
    g0: CoefficientFunction
    c_zero: complex = 0j
    preset: str = "custom"
    omega: float = None
    force: float = None
    scale: float = 1.0
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def free(cls, c_zero=0j):
        z = CoefficientFunction.constant(0.0)
        return cls(z, z, z, complex(c_zero), "free")

    @classmethod
    def harmonic(cls, omega=1.0, c_zero=0j):
        _positive(omega, "omega")
        return cls(CoefficientFunction.constant(0.5 * omega**2),
                   CoefficientFunction.constant(0.0), CoefficientFunction.constant(0.0),
                   complex(c_zero), "harmonic", omega=float(omega),
                   scale=1.0 / math.sqrt(omega))

    @classmethod
    def repulsive(cls, omega=1.0, c_zero=0j):
        _positive(omega, "omega")
        return cls(CoefficientFunction.constant(-0.5 * omega**2),
                   CoefficientFunction.constant(0.0), CoefficientFunction.constant(0.0),
                   complex(c_zero), "repulsive", omega=float(omega),
                   scale=1.0 / math.sqrt(omega))

    @classmethod
    def linear(cls, force=1.0, c_zero=0j):
        return cls(CoefficientFunction.constant(0.0), CoefficientFunction.constant(force),
                   CoefficientFunction.constant(0.0), complex(c_zero), "linear",
                   force=float(force))

    @classmethod
    def driven(cls, omega=1.0, force=1.0, c_zero=0j):
        _positive(omega, "omega")
        return cls(CoefficientFunction.constant(0.5 * omega**2),
                   CoefficientFunction.constant(force), CoefficientFunction.constant(0.0),
                   complex(c_zero), "driven", omega=float(omega), force=float(force),
                   scale=1.0 / math.sqrt(omega))

    @classmethod
    def custom(cls, g2=0.0, g1=0.0, g0=0.0, c_zero=0j, scale=1.0):
        def wrap(g):
            return g if isinstance(g, CoefficientFunction) else CoefficientFunction.from_dict(g)
        return cls(wrap(g2), wrap(g1), wrap(g0), complex(c_zero), "custom",
                   scale=float(scale))

    @classmethod
    def from_preset(cls, name, omega=1.0, force=1.0, c_zero=0j):
        if name == "free":
            return cls.free(c_zero)
        if name == "harmonic":
            return cls.harmonic(omega, c_zero)
        if name == "repulsive":
            return cls.repulsive(omega, c_zero)
        if name == "linear":
            return cls.linear(force, c_zero)
        if name == "driven":
            return cls.driven(omega, force, c_zero)
        raise ConfigurationError(f"unknown preset {name!r}")

    @property
    def domain(self):
        lo = max(g.domain[0] for g in (self.g2, self.g1, self.g0))
        hi = min(g.domain[1] for g in (self.g2, self.g1, self.g0))
        return lo, hi

    @property
    def breakpoints(self):
        pts = set()
        for g in (self.g2, self.g1, self.g0):
            pts.update(g.interior_breakpoints)
        return sorted(pts)

    def potential(self, x, tau):
        return self.g2(tau) * np.square(x) + self.g1(tau) * x + self.g0(tau)

    def with_g2_sign_flipped(self):
        """Copy with ``g2 -> -g2`` but the same basis scale (a negative control)."""
        g = self.g2
        flipped = CoefficientFunction.__new__(CoefficientFunction)
        flipped.breakpoints = g.breakpoints.copy()
        flipped.coefficients = [-c for c in g.coefficients]
        return PotentialSpec(flipped, self.g1, self.g0, self.c_zero, "custom",
                             scale=self.scale)

    def to_dict(self):
        d = {"preset": self.preset, "c_zero_re": self.c_zero.real,
             "c_zero_im": self.c_zero.imag}
        if self.preset in ("harmonic", "repulsive", "driven"):
            d["omega"] = self.omega
        if self.preset in ("linear", "driven"):
            d["force"] = self.force
        if self.preset == "custom":
            d["g2"] = self.g2.to_dict()
            d["g1"] = self.g1.to_dict()
            d["g0"] = self.g0.to_dict()
            d["scale"] = self.scale
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigurationError("potential config must be a mapping")
        known = {"preset", "omega", "force", "c_zero_re", "c_zero_im", "g2", "g1", "g0",
                 "scale"}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown potential keys: {sorted(unknown)}")
        name = d.get("preset", "custom")
        if name not in PRESETS:
            raise ConfigurationError(f"preset: unknown value {name!r}")
        try:
            c0 = complex(float(d.get("c_zero_re", 0.0)), float(d.get("c_zero_im", 0.0)))
        except (TypeError, ValueError):
            raise ConfigurationError("c_zero_re/c_zero_im must be numbers") from None
        if name == "custom":
            return cls.custom(d.get("g2", 0.0), d.get("g1", 0.0), d.get("g0", 0.0), c0,
                              d.get("scale", 1.0))
        return cls.from_preset(name, float(d.get("omega", 1.0)),
                               float(d.get("force", 1.0)), c0)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _positive(value, name):
    if not (value > 0 and math.isfinite(value)):
        raise ConfigurationError(f"{name} must be positive and finite")


def slice_potential(spec, field):
    """``V`` on a FieldGrid, evaluating the coefficients once per time slice."""
    t = field.tau
    x = field.x[:, None]
    return spec.g2(t)[None, :] * x**2 + spec.g1(t)[None, :] * x + spec.g0(t)[None, :]


def evaluate_potential(spec, x, tau):
    """``g2(tau) x^2 + g1(tau) x + g0(tau)``; raises DomainError outside the domain."""
    return spec.potential(x, tau)


def schroedinger_residual(field, spec):
    """Relative norm of ``(d_xx + 2i d_tau - 2V) Psi`` on the valid interior.

    ``field`` is a :class:`~quadsqueeze.fieldgrid.FieldGrid`.
    """
    from .fieldgrid import FieldGrid

    if not isinstance(field, FieldGrid):
        raise ConfigurationError("field must be a FieldGrid")
    field.require_min_points(5)
    V = slice_potential(spec, field)
    out = field.dxx().values + 2j * field.dt().values - 2.0 * V * field.values
    return field.relative_norm(out)
