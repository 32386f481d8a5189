import math

import numpy as np
import pytest
from scipy.integrate import quad

from quadsqueeze.auxiliary import (build_bundle, check_formula_I, check_formula_II,
                                   check_formula_III, check_formula_IV)
from quadsqueeze.classical import solve_basis
from quadsqueeze.potential import PotentialSpec
from quadsqueeze.states import r_factor

T = np.linspace(0, 10, 41)


def _bundle(spec, tau_max=10.0):
    b = solve_basis(spec, tau_max=tau_max)
    return b, build_bundle(b, spec)


def test_free_bundle_vanishes():
    b, a = _bundle(PotentialSpec.free())
    for f in (a.C, a.b3, a.B3, a.E3):
        assert np.all(f(T) == 0)
    assert np.allclose(a.phi3(T), 1 + T**2)


def test_linear_drive_integral_matches_antiderivative():
    F = 0.8
    b, a = _bundle(PotentialSpec.linear(F))
    ref = F * (T + 1j * T**2 / 2) / math.sqrt(2)
    assert np.max(np.abs(a.c(T) - ref)) < 1e-12


def test_linear_bundle_closed_forms():
    # free basis xi = (1 + i t)/sqrt(2) and C = (t + i t^2/2)/sqrt(2)
    b, a = _bundle(PotentialSpec.linear(1.0))
    assert np.allclose(a.E3(T), -(T + T**3 / 2), atol=1e-11)
    assert np.allclose(a.b3(T), -T**2 / (2 * np.sqrt(1 + T**2)), atol=1e-11)
    assert np.allclose(a.D3(T), -(T**2 + T**4 / 4) / 2, atol=1e-10)


def test_lambda_integral_against_scipy():
    b, a = _bundle(PotentialSpec.driven(1.0, 0.6, c_zero=0.3 - 0.2j))
    f = lambda s: (a.E3(s) / a.phi3(s)) ** 2 + a.D3(s) / a.phi3(s)
    for t in (0.5, 3.0, 9.0):
        assert abs(a.lambda_integral(t) - quad(f, 0, t, epsabs=1e-13, limit=200)[0]) < 1e-10


def test_b3_dot_matches_central_difference():
    b, a = _bundle(PotentialSpec.driven(1.0, 1.0, c_zero=0.5j))
    t = np.linspace(0.5, 9.5, 19)
    h = 1e-5
    fd = (a.b3(t + h) - a.b3(t - h)) / (2 * h)
    assert np.max(np.abs(fd - a.b3_dot(t))) < 1e-8


def test_formula_I_zero_drive():
    b, a = _bundle(PotentialSpec.harmonic(1.0))
    assert np.max(check_formula_I(a, b, T)) < 1e-12


@pytest.mark.parametrize("spec,tau", [(PotentialSpec.linear(1.0), 1.0),
                                      (PotentialSpec.driven(1.0, 1.0), 2.5)])
def test_formula_I(spec, tau):
    b, a = _bundle(spec)
    assert check_formula_I(a, b, tau) < 1e-8


def test_formula_II_constant_phi3():
    spec = PotentialSpec.harmonic(1.0)
    b, a = _bundle(spec)
    assert np.allclose(a.phi3(T), 1.0)
    assert np.max(check_formula_II(a, b, spec, T)) < 1e-12


def test_formula_II_free_closed_form():
    # phi3 = 1 + t^2: phi3 phi3'' - phi3'^2/2 = 2(1+t^2) - 2t^2 = 2
    spec = PotentialSpec.free()
    b, a = _bundle(spec)
    assert check_formula_II(a, b, spec, 0.0) < 1e-10
    assert a.phi3_ddot(0.0) == pytest.approx(2.0)


def test_formula_II_repulsive():
    spec = PotentialSpec.repulsive(1.0)
    b, a = _bundle(spec)
    assert check_formula_II(a, b, spec, 1.0) < 1e-8


def test_formula_II_detects_wrong_g2_sign():
    spec = PotentialSpec.harmonic(1.0)
    b, a = _bundle(spec)
    assert check_formula_II(a, b, spec.with_g2_sign_flipped(), 1.0) > 1.0


@pytest.mark.parametrize("spec,tau", [(PotentialSpec.free(), 1.0),
                                      (PotentialSpec.linear(1.0), 1.0),
                                      (PotentialSpec.driven(1.0, 1.0), 0.5)])
def test_formula_III(spec, tau):
    b, a = _bundle(spec)
    assert check_formula_III(a, b, spec, tau) < 1e-8


@pytest.mark.parametrize("spec,tau,tol", [(PotentialSpec.harmonic(1.0), 0.0, 1e-15),
                                          (PotentialSpec.linear(1.0), 2.0, 1e-8),
                                          (PotentialSpec.driven(1.0, 1.0), 5.0, 1e-7)])
def test_formula_IV(spec, tau, tol):
    b, a = _bundle(spec)
    assert check_formula_IV(a, tau) <= tol


def test_phase_factor_examples():
    b, a = _bundle(PotentialSpec.driven(1.0, 0.4, c_zero=0.2 + 0.1j))
    assert np.allclose(r_factor(np.linspace(-3, 3, 7), 0.0, a), 0.0, atol=1e-15)
    b, a = _bundle(PotentialSpec.harmonic(1.0))
    assert np.allclose(r_factor(np.linspace(-3, 3, 7), 2.3, a), 0.0, atol=1e-14)
    b, a = _bundle(PotentialSpec.free())
    assert r_factor(1.0, 1.0, a) == pytest.approx(0.25, abs=1e-14)
    # hand-evaluated for the linear drive F = 1 on the free basis
    b, a = _bundle(PotentialSpec.linear(1.0))
    assert r_factor(1.0, 1.0, a) == pytest.approx(-0.5, abs=1e-12)
