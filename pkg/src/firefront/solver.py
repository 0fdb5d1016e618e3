"""Implicit heat stepping and the fixed-point solve on one time window.

The time discretization is backward Euler: each step solves the shifted
Poisson system (I - dt * Lap) u_next = u_prev + dt * forcing with zero
boundary values, via conjugate gradients plus iterative refinement so the
per-step equation residual stays far below the fixed-point tolerance.

The nonlinear problem is solved as a fixed point: one sweep freezes the
forcing along the previous iterate's trajectory and re-solves the linear
heat problem from the initial datum; sweeps repeat until the space-time
H1 distance between successive iterates drops below picard_tol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ConfigError, LinearSolverError
from .grid import (
    GridSpec,
    ScalarField,
    boundary_max_abs,
    h1_norm,
    l2_norm,
    quadrature_weights,
)
from .model import Scenario, total_forcing

LINEAR_TOL = 1e-10


@dataclass
class Trajectory:
    """Snapshots u^0 .. u^M at uniform spacing dt, starting at time t0."""

    grid: GridSpec
    dt: float
    fields: tuple
    t0: float = 0.0

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError(f"trajectory dt must be positive, got {self.dt}")
        fields = tuple(self.fields)
        if len(fields) < 2:
            raise ConfigError("a trajectory needs at least two snapshots")
        for m, f in enumerate(fields):
            if f.grid != self.grid:
                raise ConfigError(f"snapshot {m} is on a different grid")
            if boundary_max_abs(f) != 0.0:
                raise ConfigError(
                    f"snapshot {m} violates the zero boundary constraint"
                )
        self.fields = fields

    @property
    def n_steps(self) -> int:
        return len(self.fields) - 1

    @property
    def span(self) -> float:
        return self.n_steps * self.dt

    @property
    def t_end(self) -> float:
        return self.t0 + self.span

    @property
    def final(self) -> ScalarField:
        return self.fields[-1]

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.fields))

    def snapshot(self, m) -> ScalarField:
        return self.fields[m]


@dataclass
class PicardReport:
    """Outcome of one fixed-point solve."""

    iterations: int
    residuals: tuple
    converged: bool
    regularity_ratio: float


def _check_pair(a: Trajectory, b: Trajectory):
    problems = []
    if a.grid != b.grid:
        problems.append("trajectories live on different grids")
    if len(a.fields) != len(b.fields):
        problems.append(
            f"snapshot counts differ: {len(a.fields)} vs {len(b.fields)}"
        )
    if a.dt != b.dt:
        problems.append(f"step sizes differ: {a.dt} vs {b.dt}")
    if problems:
        raise ConfigError(problems)


def _spacetime_distance(a: Trajectory, b: Trajectory, snap_norm) -> float:
    # trapezoid in time: endpoint snapshots carry half weight, so the total
    # weight is exactly the covered span and every snapshot contributes
    _check_pair(a, b)
    last = a.n_steps
    total = 0.0
    for m in range(last + 1):
        d = ScalarField(a.grid, a.fields[m].values - b.fields[m].values)
        c = 0.5 if m in (0, last) else 1.0
        total += c * a.dt * snap_norm(d) ** 2
    return math.sqrt(total)


def spacetime_h1_distance(a: Trajectory, b: Trajectory) -> float:
    """Distance in the solution space: L2 in time of the H1 norm of a - b."""
    return _spacetime_distance(a, b, h1_norm)


def spacetime_l2_distance(a: Trajectory, b: Trajectory) -> float:
    """Distance in the forcing space: L2 in time of the L2 norm of a - b."""
    return _spacetime_distance(a, b, l2_norm)


def heat_step(u_prev: ScalarField, forcing: ScalarField, dt: float) -> ScalarField:
    """One backward step of the heat flow with zero boundary values.

    Solves (I - dt * Lap) u_next = u_prev + dt * forcing to a relative
    residual of at most 1e-10, refining the conjugate-gradient solution
    until the residual divided by dt (the equation-form residual) is small
    against the solution norm as well.
    """
    if u_prev.grid != forcing.grid:
        raise ConfigError("state and forcing must share one grid")
    if not (dt > 0 and math.isfinite(dt)):
        raise ConfigError(f"dt must be positive, got {dt}")
    grid = u_prev.grid
    hx, hy = grid.hx, grid.hy

    b = u_prev.values + dt * forcing.values
    b[0, :] = 0.0
    b[-1, :] = 0.0
    b[:, 0] = 0.0
    b[:, -1] = 0.0
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return ScalarField(grid, np.zeros(grid.shape))

    maxiter = grid.n_nodes
    x, iters, _ = _backend.cg_shifted_poisson(b, dt, hx, hy, 1e-12, maxiter)
    x = np.asarray(x)
    r = b - np.asarray(_backend.shift_apply(x, dt, hx, hy))
    resid = float(np.linalg.norm(r))

    eps = np.finfo(np.float64).eps
    target = max(
        0.25 * LINEAR_TOL * dt * float(np.linalg.norm(x)),
        30.0 * eps * bnorm,
    )
    passes = 0
    while resid > target and passes < 3:
        delta, extra, _ = _backend.cg_shifted_poisson(r, dt, hx, hy, 1e-4, maxiter)
        x = x + np.asarray(delta)
        x[0, :] = 0.0
        x[-1, :] = 0.0
        x[:, 0] = 0.0
        x[:, -1] = 0.0
        r = b - np.asarray(_backend.shift_apply(x, dt, hx, hy))
        resid = float(np.linalg.norm(r))
        iters += extra
        passes += 1

    if resid > LINEAR_TOL * bnorm:
        raise LinearSolverError(resid / bnorm, iters, LINEAR_TOL)
    return ScalarField(grid, x)


def constant_trajectory(
    g: ScalarField, dt: float, n_steps: int, t0: float = 0.0
) -> Trajectory:
    """The same snapshot repeated n_steps + 1 times."""
    return Trajectory(g.grid, dt, (g,) * (n_steps + 1), t0)


def apply_solution_operator(
    traj: Trajectory, scenario: Scenario, initial: ScalarField | None = None
) -> Trajectory:
    """One fixed-point sweep: forcing frozen along traj, heat re-solved.

    Output v has v^0 = initial (the scenario's initial field by default) and
    v^{m+1} = heat_step(v^m, forcing(traj^m, t_m)), with the forcing always
    evaluated on the INPUT trajectory. A fixed point of this map satisfies
    the discrete equation.
    """
    if traj.grid != scenario.grid:
        raise ConfigError("trajectory grid does not match the scenario grid")
    if traj.dt != scenario.dt:
        raise ConfigError(
            f"trajectory dt {traj.dt} does not match scenario dt {scenario.dt}"
        )
    v = initial if initial is not None else scenario.g
    out = [v]
    for m in range(traj.n_steps):
        t_m = traj.t0 + m * traj.dt
        f = total_forcing(traj.fields[m], t_m, scenario)
        v = heat_step(v, f, traj.dt)
        out.append(v)
    return Trajectory(traj.grid, traj.dt, tuple(out), traj.t0)


def solve_short_time(
    scenario: Scenario,
    t0: float = 0.0,
    span: float | None = None,
    initial: ScalarField | None = None,
) -> tuple:
    """Fixed-point solve on one window [t0, t0 + span].

    Defaults cover [0, horizon] from the scenario's initial field; the
    chunked driver passes a window start and a restart datum. Returns the
    last iterate and a report; nonconvergence is reported, not raised, so
    the caller can decide to shrink the window.
    """
    if scenario.gamma <= 1.0:
        raise ConfigError(
            "gamma = 1 is reached only through gamma_continuation; "
            "direct solves need gamma in (1, 2]"
        )
    if span is None:
        span = scenario.horizon
    if initial is None:
        initial = scenario.g
    if not (span > 0):
        raise ConfigError(f"solve window must have positive length, got {span}")
    if initial.grid != scenario.grid:
        raise ConfigError("initial field grid does not match the scenario grid")
    if boundary_max_abs(initial) != 0.0:
        raise ConfigError("initial field must be exactly zero on the boundary ring")

    n_steps = max(1, math.ceil(span / scenario.dt - 1e-9))
    seed_traj = constant_trajectory(initial, scenario.dt, n_steps, t0)
    current = apply_solution_operator(seed_traj, scenario, initial=initial)

    residuals = []
    converged = False
    for _ in range(scenario.picard_maxit):
        candidate = apply_solution_operator(current, scenario, initial=initial)
        res = spacetime_h1_distance(candidate, current)
        residuals.append(res)
        current = candidate
        if res <= scenario.picard_tol:
            converged = True
            break

    report = PicardReport(
        iterations=len(residuals),
        residuals=tuple(residuals),
        converged=converged,
        regularity_ratio=regularity_check(current, scenario),
    )
    return current, report


def regularity_check(traj: Trajectory, scenario: Scenario) -> float:
    """Size of the solution relative to its data.

    Ratio of [sup over snapshots of the H1 norm, plus the space-time L2 norm
    of the forward-difference time derivative] to [the space-time L2 norm of
    the forcing along the trajectory, plus the H1 norm of the initial
    snapshot]. Returns 0 when the denominator vanishes. Diagnostic: across
    horizons up to 1 the ratio stays bounded by a grid constant.
    """
    if traj.grid != scenario.grid:
        raise ConfigError("trajectory grid does not match the scenario grid")
    dt = traj.dt
    sup_h1 = max(h1_norm(f) for f in traj.fields)

    dudt_sq = 0.0
    force_sq = 0.0
    for m in range(traj.n_steps):
        diff = ScalarField(
            traj.grid, (traj.fields[m + 1].values - traj.fields[m].values) / dt
        )
        dudt_sq += dt * l2_norm(diff) ** 2
        f_m = total_forcing(traj.fields[m], traj.t0 + m * dt, scenario)
        force_sq += dt * l2_norm(f_m) ** 2

    denom = math.sqrt(force_sq) + h1_norm(traj.fields[0])
    if denom == 0.0:
        return 0.0
    return (sup_h1 + math.sqrt(dudt_sq)) / denom


def equation_residual(traj: Trajectory, scenario: Scenario) -> float:
    """Worst per-step defect of the implicit update, in the quadrature L2 norm.

    For each step this measures (u^{m+1} - u^m)/dt - Lap u^{m+1} - f(u^m, t_m);
    a converged trajectory keeps it at linear-solver level.
    """
    if traj.grid != scenario.grid:
        raise ConfigError("trajectory grid does not match the scenario grid")
    dt = traj.dt
    grid = traj.grid
    w = quadrature_weights(grid)
    worst = 0.0
    for m in range(traj.n_steps):
        u_next = traj.fields[m + 1].values
        lap = np.asarray(_backend.laplacian(u_next, grid.hx, grid.hy))
        f = total_forcing(traj.fields[m], traj.t0 + m * dt, scenario).values
        defect = (u_next - traj.fields[m].values) / dt - lap - f
        # boundary rows carry no equation
        defect[0, :] = 0.0
        defect[-1, :] = 0.0
        defect[:, 0] = 0.0
        defect[:, -1] = 0.0
        worst = max(worst, float(np.sqrt(np.sum(w * defect * defect))))
    return worst
