import numpy as np
import pytest

from firefront import _kernels_np

cy = pytest.importorskip(
    "firefront._kernels_cy", reason="compiled backend not built"
)


def _random_field(rng, nx, ny):
    vals = rng.uniform(-1.0, 1.0, (nx, ny))
    vals[0, :] = vals[-1, :] = vals[:, 0] = vals[:, -1] = 0.0
    return vals


def test_laplacian_agreement():
    rng = np.random.default_rng(11)
    u = rng.uniform(-1, 1, (19, 14))
    a = _kernels_np.laplacian(u, 0.05, 0.08)
    b = cy.laplacian(u, 0.05, 0.08)
    assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))


def test_gradient_agreement():
    rng = np.random.default_rng(12)
    u = rng.uniform(-1, 1, (12, 21))
    ax, ay = _kernels_np.gradient(u, 0.1, 0.04)
    bx, by = cy.gradient(u, 0.1, 0.04)
    assert np.max(np.abs(ax - bx)) < 1e-12
    assert np.max(np.abs(ay - by)) < 1e-12


@pytest.mark.parametrize("win_shape", [(1, 1), (3, 3), (5, 3), (3, 7)])
def test_window_correlate_agreement(win_shape):
    rng = np.random.default_rng(13)
    u = rng.uniform(-1, 1, (15, 16))
    win = rng.uniform(-1, 1, win_shape)
    a = _kernels_np.window_correlate(u, win)
    b = cy.window_correlate(u, win)
    assert np.max(np.abs(a - b)) < 1e-12


def test_window_correlate_brute_force():
    rng = np.random.default_rng(14)
    u = rng.uniform(-1, 1, (8, 9))
    win = rng.uniform(-1, 1, (3, 5))
    rx, ry = 1, 2
    expect = np.zeros_like(u)
    for i in range(1, 7):
        for j in range(1, 8):
            acc = 0.0
            for a in range(3):
                for b in range(5):
                    ii, jj = i + a - rx, j + b - ry
                    if 0 <= ii < 8 and 0 <= jj < 9:
                        acc += win[a, b] * u[ii, jj]
            expect[i, j] = acc
    for mod in (_kernels_np, cy):
        got = mod.window_correlate(u, win)
        assert np.max(np.abs(got - expect)) < 1e-13


def test_shift_apply_agreement():
    rng = np.random.default_rng(15)
    u = _random_field(rng, 11, 13)
    a = _kernels_np.shift_apply(u, 0.02, 0.1, 0.083)
    b = cy.shift_apply(u, 0.02, 0.1, 0.083)
    assert np.max(np.abs(a - b)) < 1e-12


def _dense_shift_matrix(nx, ny, dt, hx, hy):
    # interior-node operator of (I - dt*Laplacian) with Dirichlet ring
    idx = {
        (i, j): k
        for k, (i, j) in enumerate(
            (i, j) for i in range(1, nx - 1) for j in range(1, ny - 1)
        )
    }
    n = len(idx)
    mat = np.zeros((n, n))
    for (i, j), k in idx.items():
        mat[k, k] = 1.0 + 2.0 * dt / hx**2 + 2.0 * dt / hy**2
        for di, dj, h in ((1, 0, hx), (-1, 0, hx), (0, 1, hy), (0, -1, hy)):
            nb = (i + di, j + dj)
            if nb in idx:
                mat[k, idx[nb]] -= dt / h**2
    return idx, mat


@pytest.mark.parametrize("mod", [_kernels_np, cy], ids=["numpy", "cython"])
def test_cg_matches_dense_solve(mod):
    nx, ny, hx, hy, dt = 9, 8, 1 / 8, 1 / 7, 0.03
    rng = np.random.default_rng(16)
    rhs = _random_field(rng, nx, ny)
    x, iters, relres = mod.cg_shifted_poisson(rhs, dt, hx, hy, 1e-12, 2000)
    assert relres <= 1e-12
    idx, mat = _dense_shift_matrix(nx, ny, dt, hx, hy)
    b = np.array([rhs[i, j] for (i, j) in idx])
    expect = np.linalg.solve(mat, b)
    got = np.array([x[i, j] for (i, j) in idx])
    assert np.max(np.abs(got - expect)) < 1e-10
    # boundary ring untouched
    assert np.all(x[0, :] == 0.0) and np.all(x[:, -1] == 0.0)


def test_cg_agreement_between_backends():
    rng = np.random.default_rng(17)
    rhs = _random_field(rng, 17, 17)
    xa, _, _ = _kernels_np.cg_shifted_poisson(rhs, 0.01, 1 / 16, 1 / 16, 1e-12, 2000)
    xb, _, _ = cy.cg_shifted_poisson(rhs, 0.01, 1 / 16, 1 / 16, 1e-12, 2000)
    assert np.max(np.abs(xa - xb)) < 1e-12


@pytest.mark.parametrize("mod", [_kernels_np, cy], ids=["numpy", "cython"])
def test_cg_eigenmode_single_iteration(mod):
    # an eigenvector spans a one-dimensional Krylov space
    n = 17
    h = 1.0 / (n - 1)
    x = np.linspace(0, 1, n)
    u = np.outer(np.sin(np.pi * x), np.sin(np.pi * x))
    u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0
    sol, iters, relres = mod.cg_shifted_poisson(u, 0.05, h, h, 1e-10, 100)
    assert iters <= 2
    lam = 2 * (4 / h**2) * np.sin(np.pi * h / 2) ** 2
    assert np.max(np.abs(sol - u / (1 + 0.05 * lam))) < 1e-12


@pytest.mark.parametrize("mod", [_kernels_np, cy], ids=["numpy", "cython"])
def test_cg_zero_rhs(mod):
    x, iters, relres = mod.cg_shifted_poisson(
        np.zeros((6, 6)), 0.01, 0.2, 0.2, 1e-12, 50
    )
    assert iters == 0
    assert relres == 0.0
    assert np.all(x == 0.0)
