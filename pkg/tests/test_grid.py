import numpy as np
import pytest

import firefront as ff
from firefront.grid import quadrature_weights

from conftest import unit_grid


def test_grid_geometry():
    g = ff.GridSpec(5, 9, 2.0, 3.0)
    assert g.hx == 0.5
    assert g.hy == 0.375
    assert g.shape == (5, 9)
    assert g.area == 6.0
    assert g.n_nodes == 45
    assert g.xs()[0] == 0.0 and g.xs()[-1] == 2.0
    assert g.ys()[0] == 0.0 and g.ys()[-1] == 3.0
    xx, yy = g.meshgrid()
    assert xx.shape == (5, 9)
    assert xx[3, 0] == g.xs()[3]
    assert yy[0, 4] == g.ys()[4]


@pytest.mark.parametrize(
    "args",
    [(2, 5, 1.0, 1.0), (5, 1, 1.0, 1.0), (5, 5, 0.0, 1.0), (5, 5, 1.0, -2.0),
     (5, 5, float("nan"), 1.0), (5, 5, 1.0, float("inf"))],
)
def test_grid_rejects_degenerate(args):
    with pytest.raises(ff.ConfigError):
        ff.GridSpec(*args)


def test_quadrature_weights_trapezoid():
    g = ff.GridSpec(4, 6, 2.0, 5.0)
    w = quadrature_weights(g)
    cell = g.hx * g.hy
    assert w[0, 0] == pytest.approx(cell / 4)
    assert w[0, 2] == pytest.approx(cell / 2)
    assert w[2, 0] == pytest.approx(cell / 2)
    assert w[1, 3] == pytest.approx(cell)
    # weights integrate constants exactly
    assert np.sum(w) == pytest.approx(g.area, rel=1e-14)


def test_quadrature_weights_read_only():
    w = quadrature_weights(unit_grid(5))
    with pytest.raises(ValueError):
        w[0, 0] = 1.0


def test_integrate_constant():
    g = ff.GridSpec(7, 11, 3.0, 0.5)
    f = ff.ScalarField.full(g, 2.5)
    assert ff.integrate(f) == pytest.approx(2.5 * g.area, rel=1e-14)


def test_scalar_field_validation():
    g = unit_grid(5)
    with pytest.raises(ff.ConfigError):
        ff.ScalarField(g, np.zeros((5, 4)))
    bad = np.zeros((5, 5))
    bad[2, 2] = np.nan
    with pytest.raises(ff.ConfigError):
        ff.ScalarField(g, bad)


def test_scalar_field_equality_and_copy():
    g = unit_grid(5)
    a = ff.ScalarField.from_function(g, lambda x, y: x + 2 * y)
    b = a.copy()
    assert a == b
    assert a.values is not b.values
    c = ff.ScalarField.full(g, 0.0)
    assert a != c


def test_vector_field_magnitude():
    g = unit_grid(5)
    v = ff.VectorField.constant(g, 3.0, 4.0)
    assert np.all(v.magnitude() == 5.0)


def test_eigenmode_boundary_exactly_zero():
    g = ff.GridSpec(33, 17, 2.0, 1.0)
    u = ff.eigenmode(g, 0.7)
    assert ff.boundary_max_abs(u) == 0.0
    xx, yy = g.meshgrid()
    expect = 0.7 * np.sin(np.pi * xx / 2.0) * np.sin(np.pi * yy)
    assert np.max(np.abs(u.values[1:-1, 1:-1] - expect[1:-1, 1:-1])) < 1e-15


def test_eigenmode_l2_norm_exact():
    # trapezoid integrates sin^2 exactly on a full half-period grid
    u = ff.eigenmode(unit_grid(17))
    assert ff.l2_norm(u) == pytest.approx(0.5, abs=1e-14)


def test_zero_boundary_ring_copies():
    vals = np.ones((4, 4))
    out = ff.zero_boundary_ring(vals)
    assert np.all(vals == 1.0)
    assert np.all(out[0, :] == 0.0) and np.all(out[:, -1] == 0.0)
    assert out[1, 1] == 1.0


def test_gradient_matches_numpy_gradient():
    g = ff.GridSpec(13, 9, 1.5, 0.8)
    rng = np.random.default_rng(3)
    f = ff.ScalarField(g, rng.uniform(-1, 1, g.shape))
    got = ff.gradient(f)
    gx = np.gradient(f.values, g.hx, axis=0)
    gy = np.gradient(f.values, g.hy, axis=1)
    assert np.max(np.abs(got.x - gx)) < 1e-14
    assert np.max(np.abs(got.y - gy)) < 1e-14


def test_laplacian_brute_force():
    g = ff.GridSpec(7, 6, 1.0, 2.0)
    rng = np.random.default_rng(4)
    f = ff.ScalarField(g, rng.uniform(-1, 1, g.shape))
    lap = ff.laplacian(f).values
    v = f.values
    for i in range(1, g.nx - 1):
        for j in range(1, g.ny - 1):
            expect = (v[i - 1, j] - 2 * v[i, j] + v[i + 1, j]) / g.hx**2 + (
                v[i, j - 1] - 2 * v[i, j] + v[i, j + 1]
            ) / g.hy**2
            assert lap[i, j] == pytest.approx(expect, rel=1e-13, abs=1e-13)
    assert np.all(lap[0, :] == 0.0) and np.all(lap[:, 0] == 0.0)
    assert np.all(lap[-1, :] == 0.0) and np.all(lap[:, -1] == 0.0)


def test_laplacian_eigenmode_identity():
    g = unit_grid(33)
    u = ff.eigenmode(g)
    lam = (4 / g.hx**2) * np.sin(np.pi * g.hx / 2) ** 2 + (
        4 / g.hy**2
    ) * np.sin(np.pi * g.hy / 2) ** 2
    lap = ff.laplacian(u).values
    diff = lap[1:-1, 1:-1] + lam * u.values[1:-1, 1:-1]
    assert np.max(np.abs(diff)) < 1e-10 * lam


def test_norms_consistency():
    g = ff.GridSpec(11, 13, 1.2, 0.9)
    rng = np.random.default_rng(5)
    f = ff.ScalarField(g, rng.uniform(-1, 1, g.shape))
    l2 = ff.l2_norm(f)
    semi = ff.h1_seminorm(f)
    h1 = ff.h1_norm(f)
    assert h1 == pytest.approx(np.hypot(l2, semi), rel=1e-14)
    # independent summation-order oracle for the seminorm
    gx = np.gradient(f.values, g.hx, axis=0)
    gy = np.gradient(f.values, g.hy, axis=1)
    w = quadrature_weights(g)
    acc = 0.0
    for i in range(g.nx):
        for j in range(g.ny):
            acc += w[i, j] * (gx[i, j] ** 2 + gy[i, j] ** 2)
    assert semi == pytest.approx(np.sqrt(acc), rel=1e-12)


def test_h1_scales_linearly():
    g = unit_grid(9)
    f = ff.eigenmode(g, 1.0)
    f3 = ff.eigenmode(g, 3.0)
    assert ff.h1_norm(f3) == pytest.approx(3 * ff.h1_norm(f), rel=1e-13)


def test_positive_negative_parts():
    a = np.array([-2.0, -0.5, 0.0, 0.7, 3.0])
    p = ff.positive_part(a)
    m = ff.negative_part(a)
    assert np.all(p >= 0) and np.all(m >= 0)
    assert np.array_equal(p - m, a)
    assert np.array_equal(m, np.array([2.0, 0.5, 0.0, 0.0, 0.0]))
    assert ff.negative_part(-1.5) == 1.5
    assert ff.negative_part(2.0) == 0.0


def test_boundary_max_abs():
    g = unit_grid(5)
    vals = np.zeros(g.shape)
    vals[0, 3] = -0.25
    f = ff.ScalarField(g, vals)
    assert ff.boundary_max_abs(f) == 0.25
