import numpy as np
import pytest

from quadsqueeze.errors import ConfigurationError
from quadsqueeze.fieldgrid import Carrier, FieldGrid


def _grid(n=201):
    return np.linspace(-1, 1, n), np.linspace(0, 1, n)


def test_plain_derivatives_second_order():
    errs = []
    for n in (101, 201):
        x, t = _grid(n)
        f = FieldGrid.from_function(lambda X, T: np.sin(2 * X) * np.exp(T), x, t)
        X, T = np.meshgrid(x, t, indexing="ij")
        e = np.nanmax(np.abs(f.dxx().full_values() - (-4 * np.sin(2 * X) * np.exp(T))))
        errs.append(e)
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_carrier_derivatives_are_exact_for_pure_carrier():
    x, t = _grid(51)
    a2 = 0.7 + 0.2 * t
    a1 = -0.3 + t * t
    car = Carrier(a2, a1, np.full_like(t, 0.2), 2 * t)
    f = FieldGrid(x, t, np.ones((x.size, t.size), complex), carrier=car)
    X, T = np.meshgrid(x, t, indexing="ij")
    full = np.exp(1j * (a2 * X**2 + a1 * X))
    assert np.allclose(f.full_values(), full)
    dx = f.dx().full_values()
    assert np.allclose(dx[1:-1, 1:-1], (1j * (2 * a2 * X + a1) * full)[1:-1, 1:-1], atol=1e-12)
    dt = f.dt().full_values()
    assert np.allclose(dt[1:-1, 1:-1], (1j * (0.2 * X**2 + 2 * T * X) * full)[1:-1, 1:-1],
                       atol=1e-12)


def test_nonuniform_grid_rejected():
    with pytest.raises(ConfigurationError):
        FieldGrid(np.array([0, 0.1, 0.3]), np.linspace(0, 1, 3), np.zeros((3, 3)))


def test_arithmetic_and_norms():
    x, t = _grid(21)
    f = FieldGrid.from_function(lambda X, T: X + 1j * T, x, t)
    g = f * 2.0 - f
    assert np.allclose(g.values, f.values)
    assert f.relative_norm(f.values * 0) == 0.0
