import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import hermite as npherm

from quadsqueeze._kernels import _pykernels
from quadsqueeze import _kernels

try:
    from quadsqueeze._kernels import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def _oracle_hermite(m, u):
    c = np.zeros(m + 1)
    c[m] = 1.0
    return npherm.hermval(u, c)


def _oracle_function(m, u):
    return _oracle_hermite(m, u) * np.exp(-u**2 / 2) / math.sqrt(
        2.0**m * math.factorial(m) * math.sqrt(math.pi))


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("m", [0, 1, 2, 3, 7, 12])
def test_hermite_poly_matches_numpy(k, m):
    u = np.linspace(-3, 3, 41)
    ref = _oracle_hermite(m, u)
    assert np.allclose(k.hermite_poly(m, u), ref, rtol=1e-12, atol=1e-12 * np.max(abs(ref)))


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
def test_hermite_functions_table_and_single(k):
    u = np.linspace(-6, 6, 101)
    table = k.hermite_functions(20, u)
    for m in range(21):
        assert np.allclose(table[m], _oracle_function(m, u), atol=1e-13)
        assert np.allclose(k.hermite_function(m, u), table[m], atol=1e-14)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
def test_hermite_functions_stay_finite_at_high_order(k):
    u = np.linspace(-40, 40, 9)
    vals = k.hermite_function(400, u)
    assert np.all(np.isfinite(vals))
    # orthonormality by Gauss-Hermite-free trapezoid on a wide grid
    x = np.linspace(-35, 35, 20001)
    f = k.hermite_function(400, x)
    assert abs(np.trapezoid(f * f, x) - 1) < 1e-8


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
def test_hermite_series_equals_explicit_sum(k):
    rng = np.random.default_rng(1)
    c = rng.normal(size=9) + 1j * rng.normal(size=9)
    u = np.linspace(-4, 4, 33)
    ref = sum(c[m] * _oracle_function(m, u) for m in range(9))
    assert np.allclose(k.hermite_series(c, u), ref, atol=1e-13)


def test_backends_agree_on_squeeze_series():
    if _ckernels is None:
        pytest.skip("compiled extension not built")
    args = (0.7 - 0.2j, 0.3 + 0.4j, 40)
    a = _pykernels.squeeze_series(*args)
    b = _ckernels.squeeze_series(*args)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


def test_backend_flag_reports_selection():
    assert _kernels.BACKEND in ("compiled", "python")


def test_env_forces_pure_python_fallback():
    env = dict(os.environ, QUADSQUEEZE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "import quadsqueeze; print(quadsqueeze.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 30), st.floats(-5, 5))
def test_hermite_recurrence_property(m, u):
    h = _pykernels.hermite_poly
    lhs = h(m + 2, np.array([u]))[0]
    rhs = 2 * u * h(m + 1, np.array([u]))[0] - 2 * (m + 1) * h(m, np.array([u]))[0]
    assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10 * max(1.0, abs(lhs)))
