import math
import warnings

import numpy as np
import pytest

from quadsqueeze.classical import solve_basis, wronskian_drift, xi, xi_dot
from quadsqueeze.errors import ConfigurationError, ConvergenceWarning, DomainError
from quadsqueeze.potential import CoefficientFunction, PotentialSpec


def test_free_closed_form():
    b = solve_basis(PotentialSpec.free())
    t = np.linspace(0, 10, 11)
    c = b.chi(t)
    assert np.allclose(c[0], 1) and np.allclose(c[1], t)
    assert wronskian_drift(b) == 0.0


def test_harmonic_integrator_matches_cos_sin():
    b = solve_basis(PotentialSpec.harmonic(1.0), use_closed_form=False)
    c = b.chi(10.0)
    assert abs(c[0] - math.cos(10)) < 1e-9 and abs(c[1] - math.sin(10)) < 1e-9


def test_repulsive_integrator_matches_cosh_sinh():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        b = solve_basis(PotentialSpec.repulsive(1.0), use_closed_form=False)
    c = b.chi(3.0)
    assert abs(c[0] - math.cosh(3)) < 1e-8 and abs(c[1] - math.sinh(3)) < 1e-8


def test_xi_values():
    b = solve_basis(PotentialSpec.free())
    assert xi(b, 0.0) == pytest.approx(1 / math.sqrt(2))
    assert xi_dot(b, 0.0) == pytest.approx(1j / math.sqrt(2))
    h = solve_basis(PotentialSpec.harmonic(1.0))
    assert abs(xi(h, math.pi / 2) - 1j / math.sqrt(2)) < 1e-12


@pytest.mark.parametrize("spec", [PotentialSpec.free(), PotentialSpec.harmonic(2.0),
                                  PotentialSpec.driven(1.0, 1.0)])
def test_xi_wronskian_identity(spec):
    b = solve_basis(spec, use_closed_form=False)
    t = np.linspace(0, 10, 257)
    z, zd = b.xi(t), b.xi_dot(t)
    assert np.max(np.abs((z * np.conj(zd) - zd * np.conj(z)).imag + 1)) < 1e-9


@pytest.mark.parametrize("spec", [PotentialSpec.harmonic(2.0), PotentialSpec.driven(1.0, 1.0)])
def test_integrated_wronskian_drift(spec):
    b = solve_basis(spec, use_closed_form=False)
    assert wronskian_drift(b, 1000) < 1e-9


def test_piecewise_g2_is_integrated_across_breakpoints():
    g2 = CoefficientFunction([0, 2, 10], [[0.5], [0.0]])
    b = solve_basis(PotentialSpec.custom(g2=g2))
    # after tau=2 the motion is free: chi(t) = chi(2) + chi_dot(2)(t-2)
    c2, d2 = np.array(b.chi(2.0)), np.array(b.chi_dot(2.0))
    assert np.allclose(np.array(b.chi(7.0)), c2 + 5 * d2, atol=1e-9)
    assert wronskian_drift(b) < 1e-9


def test_bad_initial_wronskian_rejected():
    with pytest.raises(ConfigurationError):
        solve_basis(PotentialSpec.free(), initial_data=(1, 0, 0, 2))


def test_out_of_domain():
    b = solve_basis(PotentialSpec.free(), tau_max=1.0)
    with pytest.raises(DomainError):
        b.xi(2.0)


def test_arg_xi_is_continuous():
    b = solve_basis(PotentialSpec.harmonic(1.0))
    t = np.linspace(0, 10, 2001)
    a = b.arg_xi(t)
    assert np.max(np.abs(np.diff(a))) < 0.1
    assert a[-1] == pytest.approx(10.0, abs=1e-9)
