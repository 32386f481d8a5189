"""Invariant battery: every residual check, grouped into named suites.

Each check records a residual, a tolerance and a comparison. Randomized
sweeps draw from a seeded generator whose seed is part of the report.
"""
from dataclasses import dataclass, field
import math
import os
import warnings

import numpy as np

from .algebra import (COMMUTATION_TABLE, Generators, casimir_identity_residual,
                      commutator_residual, convergence, gaussian_test_field,
                      hermiticity_residual, ladder_norm_ratios, m3_eigenvalue_residual, number_operator_residual,
                      parse_expected, tau_slices, uniform_grid)
from .auxiliary import (build_bundle, check_formula_I, check_formula_II, check_formula_III,
                        check_formula_IV)
from .classical import solve_basis, wronskian_drift
from .errors import ConvergenceWarning
from .observables import (alpha_from_initial, alpha_from_initial_z_alpha,
                          coherent_product_squared, ladder_coefficients, mean_p, mean_x,
                          product_squared_complex, product_squared_real, uncertainties,
                          variances)
from .potential import PotentialSpec, schroedinger_residual
from .squeeze import Ordering, assemble_wavefunction, expand
from .states import NumberState, number_state_field, psi_m

SUITES = ("wronskian", "formulas", "algebra", "states", "heisenberg", "representation",
          "coherent", "ehrenfest", "expansion")
TIERS = {"strict": 0.1, "default": 1.0, "loose": 10.0}
TIER_ENV = "QUADSQUEEZE_TOLERANCE_TIER"
PRESET_NAMES = ("free", "harmonic", "repulsive", "linear", "driven")
MIN_ORDER = 1.8


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""
    at_least: bool = False


@dataclass
class VerifyReport:
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, residual, tolerance, note="", at_least=False):
        residual = float(residual)
        if at_least:
            ok = residual >= tolerance  # NaN fails, inf (exact) passes
        else:
            ok = residual < tolerance and math.isfinite(residual)
        self.checks.append(CheckResult(name, residual, float(tolerance), bool(ok), note,
                                       at_least))
        return ok

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_csv(self):
        lines = ["check,residual,tolerance,pass,note"]
        for c in self.checks:
            lines.append(f"{c.name},{c.residual:.6e},{c.tolerance:.1e},"
                         f"{'PASS' if c.passed else 'FAIL'},{c.note}")
        return "\n".join(lines) + "\n"

    def summary(self):
        n_fail = len(self.failures())
        status = "PASS" if self.passed else "FAIL"
        return (f"seed={self.seed} checks={len(self.checks)} failed={n_fail} "
                f"overall={status}")


def tier_factor(tier=None):
    name = tier or os.environ.get(TIER_ENV, "default")
    if name not in TIERS:
        raise ValueError(f"unknown tolerance tier {name!r}; choose from {sorted(TIERS)}")
    return TIERS[name]


def canonical_specs(omega=1.0, force=1.0):
    return {
        "free": PotentialSpec.free(),
        "harmonic": PotentialSpec.harmonic(omega),
        "repulsive": PotentialSpec.repulsive(omega),
        "linear": PotentialSpec.linear(force),
        "driven": PotentialSpec.driven(omega, force),
    }


@dataclass
class Fixture:
    spec: PotentialSpec
    basis: object
    bundle: object


def build_fixtures(specs=None, tau_max=10.0, ode_tol=1e-10, quad_tol=1e-12):
    specs = canonical_specs() if specs is None else specs
    out = {}
    for name, spec in specs.items():
        basis = solve_basis(spec, tau_max=tau_max, tol=ode_tol)
        out[name] = Fixture(spec, basis, build_bundle(basis, spec, quad_tol))
    return out


# individual suites -----------------------------------------------------------

def suite_wronskian(report, fixtures, rng, factor, tau_max=10.0, samples=1000):
    for name, fx in fixtures.items():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            integrated = solve_basis(fx.spec, fx.basis.initial_data, tau_max,
                                     tol=1e-10, use_closed_form=False)
        drift = wronskian_drift(integrated, samples)
        report.add(f"wronskian/{name}", drift, 1e-9 * factor, "integrated, 1000 samples")
        t = np.linspace(0, tau_max, samples)
        if fx.basis.closed_form:
            dev = np.max(np.abs(integrated.state(t) - fx.basis.state(t))
                         / np.maximum(1.0, np.abs(fx.basis.state(t))))
            report.add(f"wronskian/{name}/closed_form_match", dev, 1e-8 * factor,
                       "relative, integrator vs closed form")
        report.add(f"wronskian/{name}/phi3_positive", np.min(fx.basis.phi3(t)), 0.0,
                   "min phi3", at_least=True)


def suite_formulas(report, fixtures, rng, factor, count=100, tau_max=10.0, check_spec=None):
    for name, fx in fixtures.items():
        spec = fx.spec if check_spec is None else check_spec.get(name, fx.spec)
        taus = rng.uniform(0.0, tau_max, count)
        r1 = np.max(check_formula_I(fx.bundle, fx.basis, taus))
        r2 = np.max(check_formula_II(fx.bundle, fx.basis, spec, taus))
        r3 = np.max(check_formula_III(fx.bundle, fx.basis, spec, taus))
        r4 = max(check_formula_IV(fx.bundle, t) for t in taus)
        tol = 1e-8 * factor
        report.add(f"formula_I/{name}", r1, tol)
        report.add(f"formula_II/{name}", r2, tol)
        report.add(f"formula_III/{name}", r3, tol)
        report.add(f"formula_IV/{name}", r4, tol)


def number_state_grid(state, tau, hw, tau_points=5):
    """Psi_m on a grid in zeta units: step ``hw sqrt(phi3)``, time step ``0.4 hw/(m+1)``."""
    b = state.bundle
    sq = math.sqrt(float(b.phi3(tau)))
    center = sq * float(b.b3(tau))
    x = uniform_grid(center, (math.sqrt(2 * state.m + 1) + 6) * sq, hw * sq)
    t = tau_slices(tau, 0.4 * hw / (state.m + 1), tau_points)
    return number_state_field(state, x, t)


def _converged(report, name, residual_at, h, tol, floor):
    coarse, fine, order = convergence(residual_at, h, floor)
    report.add(name, fine, tol, f"coarse={coarse:.2e} order={order:.2f}")
    report.add(name + "/order", order, MIN_ORDER, "observed order under halving",
               at_least=True)


def suite_algebra(report, fixtures, rng, factor, tau=1.0, h=5e-3):
    for name, fx in fixtures.items():
        b, a, s = fx.basis, fx.bundle, fx.spec
        center = rng.uniform(-1, 1)
        width = rng.uniform(0.7, 1.3)
        k = rng.uniform(-1, 1)

        def field_at(step):
            x = uniform_grid(center, 9 * width, step)
            return gaussian_test_field(x, tau_slices(tau, step / 4), center, width, k)

        for A, B, exp, tol in COMMUTATION_TABLE:
            expected = parse_expected(exp)
            rel = lambda step: commutator_residual(A, B, expected, field_at(step), b, a, s)
            if tol < 1e-6:
                report.add(f"algebra/{name}/[{A},{B}]", rel(h), tol * factor, "gaussian field")
            else:
                _converged(report, f"algebra/{name}/[{A},{B}]", rel, h, tol * factor, 1e-11)

        # hermiticity on one time slice of compactly supported fields
        x = uniform_grid(center, 12 * width, h / 2)
        f = gaussian_test_field(x, tau_slices(tau, h / 8), center, width, k)
        g = gaussian_test_field(x, tau_slices(tau, h / 8), -center, 0.8 * width, -k)
        report.add(f"algebra/{name}/hermiticity", hermiticity_residual(f, g, b, a, s),
                   1e-5 * factor)

        states = {m: NumberState(m, b, a) for m in range(4)}
        hw = 2e-3
        gens = Generators(b, a, s)
        _converged(report, f"algebra/{name}/extremal",
                   lambda step: _rel(gens.j_minus, number_state_grid(states[0], tau, step)),
                   hw, 1e-6 * factor, 1e-11)

        def raise_residual(step):
            f0 = number_state_grid(states[0], tau, step)
            f1 = number_state_field(states[1], f0.x, f0.tau)
            return f1.relative_norm(gens.j_plus(f0) - f1)

        _converged(report, f"algebra/{name}/J+psi0=psi1", raise_residual, hw,
                   1e-5 * factor, 1e-11)
        for m in range(4):
            st = states[m]
            _converged(report, f"algebra/{name}/M3_eigen_m{m}",
                       lambda step: m3_eigenvalue_residual(
                           st.m, number_state_grid(st, tau, step), b, a, s),
                       hw, 1e-4 * factor, 1e-11)
            _converged(report, f"algebra/{name}/number_op_m{m}",
                       lambda step: number_operator_residual(
                           st.m, number_state_grid(st, tau, step), b, a, s),
                       hw, 1e-4 * factor, 1e-11)
            _converged(report, f"algebra/{name}/identity_M3_m{m}",
                       lambda step: casimir_identity_residual(
                           number_state_grid(st, tau, step), b, a, s),
                       hw, 1e-4 * factor, 1e-11)
            up, down = ladder_norm_ratios(number_state_grid(st, tau, hw / 2), b, a, s)
            report.add(f"algebra/{name}/ladder_up_m{m}", abs(up - math.sqrt(m + 1)),
                       1e-3 * factor)
            report.add(f"algebra/{name}/ladder_down_m{m}", abs(down - math.sqrt(m)),
                       1e-3 * factor)
        # the relations must hold on arbitrary fields, not just on solutions
        _converged(report, f"algebra/{name}/identity_M3_gaussian",
                   lambda step: casimir_identity_residual(
                       gaussian_test_field(uniform_grid(center, 9 * width, step),
                                           tau_slices(tau, step / 4), center, width, k),
                       b, a, s),
                   h, 1e-4 * factor, 1e-11)


def _rel(op, field):
    return field.relative_norm(op(field))


def _norm_grid(state, tau, points=4001):
    b = state.bundle
    sq = math.sqrt(float(b.phi3(tau)))
    half = (math.sqrt(2 * 6 + 1) + 9) * sq
    center = sq * float(b.b3(tau))
    return np.linspace(center - half, center + half, points)


def state_grid_step(m):
    """Coarse zeta-unit step for the refinement pair; higher m needs finer grids."""
    return 1e-3 if m <= 2 else 5e-4


def suite_states(report, fixtures, rng, factor, m_max=6, taus=(0.0, 1.0, 5.0)):
    for name, fx in fixtures.items():
        b, a, s = fx.basis, fx.bundle, fx.spec
        for tau in taus:
            x = _norm_grid(NumberState(0, b, a), tau)
            vals = np.array([psi_m(NumberState(m, b, a), x, tau) for m in range(m_max + 1)])
            gram = np.trapezoid(np.conj(vals[:, None, :]) * vals[None, :, :], x, axis=-1)
            norm_err = np.max(np.abs(np.diag(gram).real - 1.0))
            off = np.max(np.abs(gram - np.diag(np.diag(gram))))
            report.add(f"states/{name}/tau={tau:g}/normalization", norm_err, 1e-6 * factor)
            report.add(f"states/{name}/tau={tau:g}/orthogonality", off, 1e-6 * factor)
            for m in range(m_max + 1):
                st = NumberState(m, b, a)
                coarse, fine, order = convergence(
                    lambda step: schroedinger_residual(number_state_grid(st, tau, step), s),
                    state_grid_step(m), floor=1e-9)
                report.add(f"states/{name}/tau={tau:g}/schroedinger_m{m}", fine,
                           1e-6 * factor, f"coarse={coarse:.2e}")
                report.add(f"states/{name}/tau={tau:g}/schroedinger_m{m}/order", order,
                           MIN_ORDER, at_least=True)


def _random_state(rng, fixtures, tau_max):
    name = rng.choice(sorted(fixtures))
    alpha = complex(*rng.uniform(-2, 2, 2))
    z = complex(math.cos(t := rng.uniform(0, 2 * math.pi)), math.sin(t)) * rng.uniform(0, 1)
    tau = rng.uniform(0, tau_max)
    return name, alpha, z, tau


def suite_heisenberg(report, fixtures, rng, factor, samples=1000, tau_max=10.0):
    worst = -np.inf
    for _ in range(samples):
        name, alpha, z, tau = _random_state(rng, fixtures, tau_max)
        fx = fixtures[name]
        _, _, prod = uncertainties(fx.basis, z, tau)
        worst = max(worst, 0.5 - float(prod))
    report.add("heisenberg/min_product_deficit", worst, 1e-9 * factor,
               f"{samples} samples, residual = max(1/2 - product)")


def suite_representation(report, fixtures, rng, factor, samples=1000, tau_max=10.0):
    dmean = 0.0
    dvar = 0.0
    for _ in range(samples):
        name, _, z, tau = _random_state(rng, fixtures, tau_max)
        fx = fixtures[name]
        x0, p0 = rng.uniform(-2, 2, 2)
        a1 = alpha_from_initial(x0, p0, fx.basis, fx.bundle)
        a2 = alpha_from_initial_z_alpha(x0, p0, z, fx.basis, fx.bundle)
        for fn in (mean_x, mean_p):
            v1 = fn(fx.basis, fx.bundle, a1, z, tau, Ordering.ALPHA_Z)
            v2 = fn(fx.basis, fx.bundle, a2, z, tau, Ordering.Z_ALPHA)
            dmean = max(dmean, abs(float(v1 - v2)))
        vx, vp = variances(fx.basis, z, tau)
        lc = ladder_coefficients(fx.basis, fx.bundle, a1, z, tau)
        dvar = max(dvar, abs(float((lc.X_plus * lc.X_minus).real - vx)) / max(1.0, vx),
                   abs(float((lc.X_plus_dot * lc.X_minus_dot).real - vp)) / max(1.0, vp))
    report.add("representation/means", dmean, 1e-10 * factor, f"{samples} samples")
    report.add("representation/variances", dvar, 1e-12 * factor, "X+X- vs expanded form")


def suite_coherent(report, fixtures, rng, factor):
    fx = fixtures["harmonic"]
    t = np.linspace(0, 2 * math.pi, 1001)
    _, _, prod = uncertainties(fx.basis, 0, t)
    report.add("coherent/harmonic_product", np.max(np.abs(prod - 0.5)), 1e-9 * factor)
    fr = fixtures["free"]
    t10 = np.linspace(0, 10, 1001)
    _, _, prod = uncertainties(fr.basis, 0, t10)
    report.add("coherent/free_spreading", np.max(np.abs(prod**2 - 0.25 * (1 + t10**2))),
               1e-9 * factor)
    dx, dp, prod = uncertainties(fx.basis, 0.5, 0.0)
    dev = max(abs(dx**2 - 0.5 * math.e), abs(dp**2 - 0.5 / math.e), abs(prod - 0.5))
    report.add("coherent/squeezed_harmonic_tau0", dev, 1e-9 * factor)
    worst_red = worst_forms = 0.0
    for name, f in fixtures.items():
        vx, vp = variances(f.basis, 0, t10)
        red = np.abs(product_squared_real(f.basis, 0, t10) - coherent_product_squared(f.basis, t10))
        worst_red = max(worst_red, float(np.max(red / np.maximum(1, vx * vp))))
        for _ in range(5):
            z = complex(*rng.uniform(-0.7, 0.7, 2))
            vx, vp = variances(f.basis, z, t10)
            ref = vx * vp
            for form in (product_squared_complex, product_squared_real):
                d = np.abs(form(f.basis, z, t10) - ref) / np.maximum(1.0, ref)
                worst_forms = max(worst_forms, float(np.max(d)))
    report.add("coherent/reduction_z0", worst_red, 1e-10 * factor, "relative to max(1, product^2)")
    report.add("coherent/complex_vs_real_forms", worst_forms, 1e-10 * factor,
               "relative to max(1, product^2)")


def ehrenfest_residuals(fx, alpha, z, ordering, tau_grid, h=1e-4):
    """Central-difference residuals of the two Ehrenfest relations."""
    b, a, s = fx.basis, fx.bundle, fx.spec
    t = np.asarray(tau_grid, dtype=float)
    x = lambda tt: mean_x(b, a, alpha, z, tt, ordering)
    p = lambda tt: mean_p(b, a, alpha, z, tt, ordering)
    dx = (x(t + h) - x(t - h)) / (2 * h)
    dp = (p(t + h) - p(t - h)) / (2 * h)
    r1 = np.abs(dx - p(t))
    r2 = np.abs(dp + 2 * s.g2(t) * x(t) + s.g1(t))
    return float(np.max(r1)), float(np.max(r2))


def suite_ehrenfest(report, fixtures, rng, factor, tau_max=5.0):
    t = np.linspace(1e-3, tau_max, 501)
    for name, fx in fixtures.items():
        worst = [0.0, 0.0]
        for ordering in Ordering:
            for _ in range(3):
                x0, p0 = rng.uniform(-2, 2, 2)
                z = complex(*rng.uniform(-0.7, 0.7, 2))
                if ordering is Ordering.ALPHA_Z:
                    alpha = alpha_from_initial(x0, p0, fx.basis, fx.bundle)
                else:
                    alpha = alpha_from_initial_z_alpha(x0, p0, z, fx.basis, fx.bundle)
                r = ehrenfest_residuals(fx, alpha, z, ordering, t)
                worst = [max(worst[0], r[0]), max(worst[1], r[1])]
        report.add(f"ehrenfest/{name}/dx-p", worst[0], 1e-6 * factor)
        report.add(f"ehrenfest/{name}/dp+V'", worst[1], 1e-6 * factor)


EXPANSION_CASES = ((0.0, 0.5), (1.0, 0.3), (1 + 1j, 0.5 * np.exp(1j * np.pi / 3)),
                   (2.0, 1.0), (-1.5 + 1.2j, 0.8 * np.exp(-2j)), (0.3 - 2j, 1j))


def expansion_moments(fx, alpha, z, ordering, tau, N=300, points=4001, k=10.0):
    """Grid ``(<x>, Delta x)`` of the assembled state and the closed-form values."""
    e = expand(alpha, z, N, ordering)
    mx = float(mean_x(fx.basis, fx.bundle, alpha, z, tau, ordering))
    dx, _, _ = uncertainties(fx.basis, z, tau)
    x = np.linspace(mx - k * dx, mx + k * dx, points)
    wf = assemble_wavefunction(e, x, tau, fx.bundle)
    gm, gd = wf.moments()
    return e, (gm, float(gd)), (mx, float(dx))


def suite_expansion(report, fixtures, rng, factor, N=300):
    worst_norm = 0.0
    for alpha, z in EXPANSION_CASES:
        for ordering in Ordering:
            e = expand(alpha, z, N, ordering)
            worst_norm = max(worst_norm, e.tail_bound)
    report.add("expansion/norm_N300", worst_norm, 1e-6 * factor)
    for name in ("harmonic", "driven"):
        fx = fixtures[name]
        dmean = ddx = 0.0
        for alpha, z in EXPANSION_CASES:
            for ordering in Ordering:
                for tau in (0.0, 1.0):
                    _, (gm, gd), (mx, dx) = expansion_moments(fx, alpha, z, ordering, tau, N)
                    dmean = max(dmean, abs(gm - mx))
                    ddx = max(ddx, abs(gd - dx))
        report.add(f"expansion/{name}/mean_x", dmean, 1e-5 * factor)
        report.add(f"expansion/{name}/delta_x", ddx, 1e-4 * factor)


_SUITE_FUNCS = {
    "wronskian": suite_wronskian,
    "formulas": suite_formulas,
    "algebra": suite_algebra,
    "states": suite_states,
    "heisenberg": suite_heisenberg,
    "representation": suite_representation,
    "coherent": suite_coherent,
    "ehrenfest": suite_ehrenfest,
    "expansion": suite_expansion,
}


def run_verify(suites=None, seed=20240611, fixtures=None, tier=None, corrupt_g2_sign=False,
               presets=None):
    """Run the selected suites (default: all) and return a :class:`VerifyReport`.

    With ``corrupt_g2_sign`` the formula checks compare the basis against a
    potential whose ``g2`` has the opposite sign: a negative control that
    must fail.
    """
    factor = tier_factor(tier)
    selected = list(SUITES) if not suites else list(suites)
    for s in selected:
        if s not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {s!r}; choose from {SUITES}")
    rng = np.random.default_rng(seed)
    if fixtures is None:
        specs = canonical_specs()
        if presets:
            specs = {k: v for k, v in specs.items() if k in presets}
        fixtures = build_fixtures(specs)
    report = VerifyReport(seed)
    for s in selected:
        if s == "formulas" and corrupt_g2_sign:
            bad = {k: fx.spec.with_g2_sign_flipped() for k, fx in fixtures.items()}
            suite_formulas(report, fixtures, rng, factor, check_spec=bad)
        elif s in ("coherent", "expansion") and not {"harmonic", "free", "driven"} <= set(fixtures):
            continue
        else:
            _SUITE_FUNCS[s](report, fixtures, rng, factor)
    return report
