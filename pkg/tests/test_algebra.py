import math

import numpy as np
import pytest

from quadsqueeze.algebra import (COMMUTATION_TABLE, GeneratorKind, Generators, apply_generator,
                                 casimir_identity_residual, commutator_residual, convergence,
                                 gaussian_test_field, hermiticity_residual, ladder_norm_ratios, m3_eigenvalue_residual,
                                 number_operator_residual, parse_expected,
                                 quadratic_identity_residual, tau_slices, uniform_grid)
from quadsqueeze.errors import ConfigurationError
from quadsqueeze.fieldgrid import FieldGrid
from quadsqueeze.states import NumberState, number_state_field
from quadsqueeze.verify import number_state_grid

H = 5e-3
HW = 2e-3


def _gauss(step, tau=1.0, center=0.2, width=1.0, k=0.4):
    return gaussian_test_field(uniform_grid(center, 9 * width, step),
                               tau_slices(tau, step / 4), center, width, k)


def _state(fx, m, tau=1.0, hw=HW):
    return number_state_grid(NumberState(m, fx.basis, fx.bundle), tau, hw)


def test_identity_returns_field(harmonic):
    f = _gauss(H)
    g = apply_generator(GeneratorKind.IDENTITY, f, harmonic.basis, harmonic.bundle)
    assert np.array_equal(g.values, f.values)


def test_small_grid_rejected(harmonic):
    f = FieldGrid(np.linspace(0, 1, 3), np.linspace(0, 1, 3), np.ones((3, 3)))
    with pytest.raises(ConfigurationError):
        apply_generator("J-", f, harmonic.basis, harmonic.bundle)


@pytest.mark.parametrize("name", ["harmonic", "driven"])
def test_lowering_annihilates_ground_state(fixtures, name):
    fx = fixtures[name]
    f = _state(fx, 0)
    out = Generators(fx.basis, fx.bundle, fx.spec).j_minus(f)
    assert f.relative_norm(out) < 1e-6


@pytest.mark.parametrize("name", ["harmonic", "linear"])
def test_raising_ground_state_gives_first_excited(fixtures, name):
    fx = fixtures[name]
    f0 = _state(fx, 0)
    f1 = number_state_field(NumberState(1, fx.basis, fx.bundle), f0.x, f0.tau)
    up = Generators(fx.basis, fx.bundle, fx.spec).j_plus(f0)
    assert f1.relative_norm(up - f1) < 1e-5


def test_canonical_commutator_on_gaussian(fixtures):
    fx = fixtures["driven"]
    r = commutator_residual("J-", "J+", parse_expected({"I": 1.0}), _gauss(H / 2), fx.basis,
                            fx.bundle, fx.spec)
    assert r < 1e-5


def test_m3_raises_on_first_excited(harmonic):
    r = commutator_residual("M3", "J+", parse_expected({"J+": 1.0}), _state(harmonic, 1),
                            harmonic.basis, harmonic.bundle, harmonic.spec)
    assert r < 1e-4


def test_m3_commutes_with_identity(harmonic):
    r = commutator_residual("M3", "I", {}, _gauss(H), harmonic.basis, harmonic.bundle)
    assert r < 1e-13


@pytest.mark.parametrize("name", ["free", "repulsive", "driven"])
@pytest.mark.parametrize("rel", COMMUTATION_TABLE, ids=lambda r: f"[{r[0]},{r[1]}]")
def test_commutation_table_converges(fixtures, name, rel):
    a, b, exp, tol = rel
    fx = fixtures[name]
    fn = lambda step: commutator_residual(a, b, parse_expected(exp), _gauss(step), fx.basis,
                                          fx.bundle, fx.spec)
    coarse, fine, order = convergence(fn, H)
    assert fine < tol
    assert order > 1.8


@pytest.mark.parametrize("name,m", [("harmonic", 0), ("free", 2), ("driven", 3)])
def test_m3_eigenvalues(fixtures, name, m):
    fx = fixtures[name]
    f = _state(fx, m)
    r = m3_eigenvalue_residual(m, f, fx.basis, fx.bundle, fx.spec)
    assert r < 1e-4
    # linear in the field: scaling leaves the relative residual unchanged
    r2 = m3_eigenvalue_residual(m, f * 2.0, fx.basis, fx.bundle, fx.spec)
    assert r2 == pytest.approx(r, rel=1e-12)


@pytest.mark.parametrize("name,m", [("harmonic", 0), ("free", 3)])
def test_casimir_identity(fixtures, name, m):
    fx = fixtures[name]
    assert casimir_identity_residual(_state(fx, m), fx.basis, fx.bundle, fx.spec) < 1e-4


def test_number_operator(fixtures):
    fx = fixtures["repulsive"]
    assert number_operator_residual(2, _state(fx, 2), fx.basis, fx.bundle, fx.spec) < 1e-4


@pytest.mark.parametrize("kind", ["M-", "M+", "M3"])
def test_quadratic_identities_on_gaussian(fixtures, kind):
    fx = fixtures["driven"]
    fn = lambda step: quadratic_identity_residual(kind, _gauss(step), fx.basis, fx.bundle,
                                                  fx.spec)
    coarse, fine, order = convergence(fn, H)
    assert fine < 1e-4 and order > 1.8


@pytest.mark.parametrize("m", range(4))
def test_ladder_norms(fixtures, m):
    fx = fixtures["linear"]
    up, down = ladder_norm_ratios(_state(fx, m, hw=HW / 2), fx.basis, fx.bundle, fx.spec)
    assert abs(up - math.sqrt(m + 1)) < 1e-3
    assert abs(down - math.sqrt(m)) < 1e-3


def test_raising_is_adjoint_of_lowering(fixtures):
    fx = fixtures["driven"]
    x = uniform_grid(0.0, 12.0, H / 2)
    t = tau_slices(1.0, H / 8)
    f = gaussian_test_field(x, t, 0.3, 1.0, 0.5)
    g = gaussian_test_field(x, t, -0.4, 0.8, -0.2)
    assert hermiticity_residual(f, g, fx.basis, fx.bundle, fx.spec) < 1e-5


def test_wrong_sign_raising_operator_fails_adjointness(fixtures):
    # flipping the constant term of J+ breaks the adjoint pairing: the check has teeth
    fx = fixtures["driven"]
    gens = Generators(fx.basis, fx.bundle, fx.spec)
    x = uniform_grid(0.0, 12.0, H / 2)
    t = tau_slices(1.0, H / 8)
    f = gaussian_test_field(x, t, 0.3, 1.0, 0.5)
    g = gaussian_test_field(x, t, -0.4, 0.8, -0.2)
    C = np.asarray(fx.bundle.C(t))[None, :]
    bad = gens.j_plus(f) + f.scale(2j * np.conj(C))
    mask = np.isfinite(bad.values)
    jg = gens.j_minus(g)
    mask &= np.isfinite(jg.values)
    diff = np.max(np.abs(bad.inner(g, mask) - f.inner(jg, mask)))
    assert diff > 1e-2
