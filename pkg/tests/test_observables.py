import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from quadsqueeze.errors import NumericError
from quadsqueeze.observables import (alpha_from_initial, alpha_from_initial_z_alpha,
                                     coherent_product_squared, ladder_coefficients, mean_p,
                                     mean_x, product_squared_complex, product_squared_real,
                                     trajectory, trajectory_from_initial, uncertainties,
                                     variances)
from quadsqueeze.squeeze import Ordering

DIM = 160
S2 = math.sqrt(2)


def _fock_moments(alpha, z, ordering):
    """Means and covariances at tau = 0 from truncated ladder matrices.

    With the unit initial data ``xi(0) = 1/sqrt2``, ``xi'(0) = i/sqrt2`` and
    no drive offset, ``x = (a + a+)/sqrt2`` and ``p = i(a+ - a)/sqrt2``.
    """
    a = np.diag(np.sqrt(np.arange(1, DIM)), 1).astype(complex)
    ad = a.conj().T
    D = expm(alpha * ad - np.conj(alpha) * a)
    S = expm(z * (ad @ ad) / 2 - np.conj(z) * (a @ a) / 2)
    vac = np.zeros(DIM, complex)
    vac[0] = 1
    v = D @ S @ vac if ordering is Ordering.ALPHA_Z else S @ D @ vac
    x = (a + ad) / S2
    p = 1j * (ad - a) / S2
    ev = lambda op: (v.conj() @ op @ v).real
    mx, mp = ev(x), ev(p)
    vxx = ev(x @ x) - mx**2
    vpp = ev(p @ p) - mp**2
    cxp = 0.5 * ev(x @ p + p @ x) - mx * mp
    return mx, mp, vxx, vpp, cxp


def _moment_flow(spec, y0, taus):
    """Exact first and second moment equations of a quadratic Hamiltonian."""
    def rhs(t, y):
        mx, mp, vxx, vpp, cxp = y
        g2, g1 = spec.g2(t), spec.g1(t)
        return [mp, -2 * g2 * mx - g1, 2 * cxp, -4 * g2 * cxp, vpp - 2 * g2 * vxx]
    sol = solve_ivp(rhs, (0, taus[-1]), y0, t_eval=taus, rtol=1e-12, atol=1e-13,
                    method="DOP853")
    return sol.y


@pytest.mark.parametrize("name", ["harmonic", "repulsive", "linear", "driven"])
@pytest.mark.parametrize("ordering", list(Ordering))
def test_moments_follow_exact_flow(fixtures, name, ordering):
    fx = fixtures[name]
    alpha, z = 0.6 - 0.3j, 0.4 * cmath.exp(0.7j)
    taus = np.linspace(0, 3, 13)
    mx, mp, vxx, vpp, cxp = _fock_moments(alpha, z, ordering)
    ref = _moment_flow(fx.spec, [mx, mp, vxx, vpp, 0.0 + cxp], taus)
    b, a = fx.basis, fx.bundle
    scale = np.maximum(1.0, np.abs(ref))
    assert np.max(np.abs(mean_x(b, a, alpha, z, taus, ordering) - ref[0]) / scale[0]) < 1e-8
    assert np.max(np.abs(mean_p(b, a, alpha, z, taus, ordering) - ref[1]) / scale[1]) < 1e-8
    vx, vp = variances(b, z, taus)
    assert np.max(np.abs(vx - ref[2]) / scale[2]) < 1e-8
    assert np.max(np.abs(vp - ref[3]) / scale[3]) < 1e-8


def test_ladder_coefficient_examples(harmonic):
    b, a = harmonic.basis, harmonic.bundle
    c = ladder_coefficients(b, a, 0, 0, 0.7)
    assert c.X_minus == pytest.approx(np.conj(b.xi(0.7)))
    assert c.X_plus == pytest.approx(b.xi(0.7))
    c = ladder_coefficients(b, a, 0, 0.5, 0.0)
    assert c.X_minus == pytest.approx(math.exp(0.5) / S2)
    c = ladder_coefficients(b, a, 1.0, 0, 0.0)
    assert c.X_0 == pytest.approx(S2)


@pytest.mark.parametrize("ordering", list(Ordering))
def test_zero_displacement_means(harmonic, ordering):
    t = np.linspace(0, 6, 7)
    b, a = harmonic.basis, harmonic.bundle
    assert np.all(mean_x(b, a, 0, 0.3, t, ordering) == 0)
    assert np.all(mean_p(b, a, 0, 0.3, t, ordering) == 0)


def test_free_and_harmonic_means(fixtures):
    fr, h = fixtures["free"], fixtures["harmonic"]
    t = np.linspace(0, 10, 21)
    al = alpha_from_initial(1.0, 0.0, fr.basis, fr.bundle)
    assert al == pytest.approx(1 / S2)
    assert np.allclose(mean_x(fr.basis, fr.bundle, al, 0, t), 1.0, atol=1e-14)
    assert np.allclose(mean_p(fr.basis, fr.bundle, al, 0, t), 0.0, atol=1e-14)
    al = alpha_from_initial(1.0, 0.0, h.basis, h.bundle)
    assert np.allclose(mean_x(h.basis, h.bundle, al, 0, t), np.cos(t), atol=1e-14)


def test_alpha_from_initial_examples(fixtures):
    fr = fixtures["free"]
    assert alpha_from_initial(0, 0, fr.basis, fr.bundle) == 0
    assert alpha_from_initial(0.3, -1.1, fr.basis, fr.bundle) == pytest.approx(
        (0.3 - 1.1j) / S2)
    assert alpha_from_initial_z_alpha(0.3, -1.1, 0, fr.basis, fr.bundle) == pytest.approx(
        alpha_from_initial(0.3, -1.1, fr.basis, fr.bundle))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["free", "harmonic", "repulsive", "linear", "driven"]),
       st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_initial_round_trip(fixtures, name, x0, p0, r, theta):
    fx = fixtures[name]
    b, a = fx.basis, fx.bundle
    z = r * cmath.exp(1j * theta)
    al = alpha_from_initial(x0, p0, b, a)
    assert abs(mean_x(b, a, al, z, 0.0) - x0) < 1e-10
    assert abs(mean_p(b, a, al, z, 0.0) - p0) < 1e-10
    al = alpha_from_initial_z_alpha(x0, p0, z, b, a)
    assert abs(mean_x(b, a, al, z, 0.0, Ordering.Z_ALPHA) - x0) < 1e-10
    assert abs(mean_p(b, a, al, z, 0.0, Ordering.Z_ALPHA) - p0) < 1e-10


def test_orderings_give_same_means_after_inversion(fixtures):
    fr = fixtures["free"]
    t = np.linspace(0, 10, 11)
    ref = mean_x(fr.basis, fr.bundle, alpha_from_initial(1, 0, fr.basis, fr.bundle), 0.5, t)
    al = alpha_from_initial_z_alpha(1, 0, 0.5, fr.basis, fr.bundle)
    assert np.allclose(mean_x(fr.basis, fr.bundle, al, 0.5, t, Ordering.Z_ALPHA), ref,
                       atol=1e-14)
    h = fixtures["harmonic"]
    z = 0.3 * cmath.exp(1j * math.pi / 4)
    al = alpha_from_initial_z_alpha(0, 1, z, h.basis, h.bundle)
    assert abs(mean_x(h.basis, h.bundle, al, z, 0.0, Ordering.Z_ALPHA)) < 1e-10
    assert abs(mean_p(h.basis, h.bundle, al, z, 0.0, Ordering.Z_ALPHA) - 1) < 1e-10


def test_uncertainty_examples(fixtures):
    h, fr = fixtures["harmonic"], fixtures["free"]
    t = np.linspace(0, 2 * math.pi, 50)
    vx, vp = variances(h.basis, 0, t)
    assert np.allclose(vx, 0.5) and np.allclose(vp, 0.5)
    vx, vp = variances(h.basis, 0.5, 0.0)
    assert vx == pytest.approx(0.5 * math.e) and vp == pytest.approx(0.5 / math.e)
    t = np.linspace(0, 10, 50)
    assert np.allclose(uncertainties(fr.basis, 0, t)[2] ** 2, 0.25 * (1 + t**2), atol=1e-12)


@pytest.mark.parametrize("name", ["free", "harmonic", "repulsive", "driven"])
def test_product_forms_agree(fixtures, name):
    b = fixtures[name].basis
    t = np.linspace(0, 5, 31)
    z = 0.6 * cmath.exp(2.1j)
    vx, vp = variances(b, z, t)
    assert np.allclose(product_squared_complex(b, z, t), vx * vp, rtol=1e-12)
    assert np.allclose(product_squared_real(b, z, t), vx * vp, rtol=1e-12)
    assert np.allclose(product_squared_real(b, 0, t), coherent_product_squared(b, t),
                       rtol=1e-12)


def test_invalid_variance_is_reported():
    class Broken:
        def xi(self, t):
            return np.full(np.shape(t), np.nan + 0j)
        xi_dot = xi
    with pytest.raises(NumericError):
        variances(Broken(), 0, 0.0)


def test_trajectory_records(fixtures):
    h, fr = fixtures["harmonic"], fixtures["free"]
    t = np.linspace(0, 2 * math.pi, 100)
    rec = trajectory_from_initial(h.basis, h.bundle, 1.0, 0.0, 0, t)
    assert len(rec) == 100
    assert max(abs(r.product - 0.5) for r in rec) < 1e-9
    assert max(abs(r.mean_x - math.cos(r.tau)) for r in rec) < 1e-12
    rec = trajectory_from_initial(fr.basis, fr.bundle, 0.0, 1.0, 0, np.linspace(0, 4, 9))
    assert all(abs(r.mean_x - r.tau) < 1e-12 for r in rec)
    (r0,) = trajectory_from_initial(h.basis, h.bundle, 0.4, -0.2, 0.3, [0.0])
    assert (r0.mean_x, r0.mean_p) == pytest.approx((0.4, -0.2), abs=1e-12)
    with pytest.raises(ValueError):
        trajectory(h.basis, h.bundle, 0, 0, [1.0, 0.5])
