import numpy as np

import firefront as ff


def unit_grid(n=17):
    return ff.GridSpec(n, n, 1.0, 1.0)


def discrete_decay_rate(grid):
    # 5-point eigenvalue of the lowest Dirichlet mode on the rectangle
    sx = np.sin(np.pi * grid.hx / (2.0 * grid.lx))
    sy = np.sin(np.pi * grid.hy / (2.0 * grid.ly))
    return 4.0 * sx * sx / grid.hx**2 + 4.0 * sy * sy / grid.hy**2


def zero_data_scenario(n=17, horizon=0.1, dt=0.005, amp=1.0, gamma=1.5):
    """All nonlinear data vanish: the solve is the pure discrete heat flow."""
    grid = unit_grid(n)
    return ff.Scenario(
        grid=grid,
        kernel=ff.Kernel.zero(grid),
        theta=ff.ScalarField.zeros(grid),
        omega=ff.VectorField.zeros(grid),
        beta=ff.BetaFunction.constant(0.0),
        gamma=gamma,
        g=ff.eigenmode(grid, amp),
        horizon=horizon,
        dt=dt,
    )


def small_scenario(
    n=17,
    horizon=0.1,
    dt=0.005,
    gamma=1.5,
    kernel_const=0.01,
    wind=(0.02, -0.01),
    beta_const=0.01,
    theta_const=0.4,
    amp=0.3,
):
    """Structural norms well inside the contraction regime."""
    grid = unit_grid(n)
    kernel = ff.Kernel.dense(
        grid, np.full((grid.n_nodes, grid.n_nodes), kernel_const)
    )
    return ff.Scenario(
        grid=grid,
        kernel=kernel,
        theta=ff.ScalarField.full(grid, theta_const),
        omega=ff.VectorField.constant(grid, *wind),
        beta=ff.BetaFunction.constant(beta_const),
        gamma=gamma,
        g=ff.eigenmode(grid, amp),
        horizon=horizon,
        dt=dt,
    )
