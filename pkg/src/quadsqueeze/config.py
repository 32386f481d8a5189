"""Run configuration: parsing, validation and canonical serialization."""
from dataclasses import dataclass, field, replace
import json
import math

from .errors import ConfigurationError
from .potential import PotentialSpec
from .squeeze import Ordering

OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    potential: PotentialSpec = field(default_factory=lambda: PotentialSpec.harmonic(1.0))
    x0: float = 0.0
    p0: float = 0.0
    alpha: complex = None
    z_r: float = 0.0
    z_theta: float = 0.0
    ordering: Ordering = Ordering.ALPHA_Z
    tau_max: float = 2 * math.pi
    tau_steps: int = 100
    grid_k: float = 8.0
    grid_points: int = 2001
    ode_tol: float = 1e-10
    quad_tol: float = 1e-12
    series_tol: float = 1e-6
    output: str = "csv"
    seed: int = 20240611
    initial_data: tuple = None

    def __post_init__(self):
        checks = [
            (self.tau_steps >= 1, "tau_steps", "must be >= 1"),
            (self.tau_max > 0 and math.isfinite(self.tau_max), "tau_max",
             "must be positive and finite"),
            (self.grid_k >= 4, "grid.k", "must be >= 4"),
            (self.grid_points >= 5, "grid.points", "must be >= 5"),
            (self.z_r >= 0 and math.isfinite(self.z_r), "z.r", "must be >= 0"),
            (self.output in OUTPUT_FORMATS, "output", f"must be one of {OUTPUT_FORMATS}"),
        ]
        for name in ("ode_tol", "quad_tol", "series_tol"):
            v = getattr(self, name)
            checks.append((v > 0 and math.isfinite(v), f"tolerances.{name}", "must be positive"))
        for ok, name, msg in checks:
            if not ok:
                raise ConfigurationError(f"{name}: {msg}")

    @property
    def z(self):
        return complex(math.cos(self.z_theta), math.sin(self.z_theta)) * self.z_r

    def to_dict(self):
        d = {
            "potential": self.potential.to_dict(),
            "x0": self.x0,
            "p0": self.p0,
            "alpha": None if self.alpha is None else [self.alpha.real, self.alpha.imag],
            "z": [self.z_r, self.z_theta],
            "ordering": self.ordering.value,
            "tau_max": self.tau_max,
            "tau_steps": self.tau_steps,
            "grid": {"k": self.grid_k, "points": self.grid_points},
            "tolerances": {"ode_tol": self.ode_tol, "quad_tol": self.quad_tol,
                           "series_tol": self.series_tol},
            "output": self.output,
            "seed": self.seed,
        }
        if self.initial_data is not None:
            d["initial_data"] = list(self.initial_data)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_TOP = {"potential", "x0", "p0", "alpha", "z", "ordering", "tau_max", "tau_steps", "grid",
        "tolerances", "output", "seed", "initial_data"}


def _num(d, key, default, cast=float):
    v = d.get(key, default)
    try:
        out = cast(v)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{key}: expected a number, got {v!r}") from None
    if cast is float and not math.isfinite(out):
        raise ConfigurationError(f"{key}: must be finite")
    return out


def config_from_dict(d):
    if not isinstance(d, dict):
        raise ConfigurationError("config must be a JSON object")
    unknown = set(d) - _TOP
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    pot = PotentialSpec.from_dict(d.get("potential", {"preset": "harmonic", "omega": 1.0}))
    alpha = d.get("alpha")
    if alpha is not None:
        try:
            re, im = alpha
            alpha = complex(float(re), float(im))
        except (TypeError, ValueError):
            raise ConfigurationError("alpha: expected [re, im]") from None
    z = d.get("z", [0.0, 0.0])
    try:
        z_r, z_theta = float(z[0]), float(z[1])
    except (TypeError, ValueError, IndexError):
        raise ConfigurationError("z: expected [r, theta]") from None
    try:
        ordering = Ordering(d.get("ordering", "alpha_z"))
    except ValueError:
        raise ConfigurationError(f"ordering: unknown value {d.get('ordering')!r}") from None
    grid = d.get("grid", {})
    tols = d.get("tolerances", {})
    if not isinstance(grid, dict) or not isinstance(tols, dict):
        raise ConfigurationError("grid and tolerances must be objects")
    init = d.get("initial_data")
    if init is not None:
        if not isinstance(init, (list, tuple)) or len(init) != 4:
            raise ConfigurationError("initial_data: expected four numbers")
        init = tuple(float(v) for v in init)
    return RunConfig(
        potential=pot,
        x0=_num(d, "x0", 0.0),
        p0=_num(d, "p0", 0.0),
        alpha=alpha,
        z_r=z_r,
        z_theta=z_theta,
        ordering=ordering,
        tau_max=_num(d, "tau_max", 2 * math.pi),
        tau_steps=_num(d, "tau_steps", 100, int),
        grid_k=_num(grid, "k", 8.0),
        grid_points=_num(grid, "points", 2001, int),
        ode_tol=_num(tols, "ode_tol", 1e-10),
        quad_tol=_num(tols, "quad_tol", 1e-12),
        series_tol=_num(tols, "series_tol", 1e-6),
        output=str(d.get("output", "csv")),
        seed=_num(d, "seed", 20240611, int),
        initial_data=init,
    )


def parse_config(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}") from None
    return config_from_dict(d)


def serialize_config(config):
    return config.to_json()
