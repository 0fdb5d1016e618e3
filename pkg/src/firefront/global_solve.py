"""Global-in-time solving: chunked windows, gluing, and gamma continuation.

A long horizon is covered by short windows solved one after another, each
restarted from the exact endpoint snapshot of the previous one, so every
junction jump is identically zero. A window that fails to converge is
halved and retried; after it succeeds the driver returns to the planned
window length. The continuation driver runs the same global solve for a
decreasing sequence of gamma values and reports whether the trajectories
behave like a Cauchy sequence, which is the computable evidence for a
sharp-interface (gamma to 1) limit under small data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, JunctionMismatchError, NonconvergenceError
from .model import Scenario
from .solver import (
    PicardReport,
    Trajectory,
    solve_short_time,
    spacetime_l2_distance,
)

JUNCTION_TOL = 1e-12
EPSILON_0 = 0.05
CAUCHY_TOL = 1e-4


@dataclass
class ChunkPlan:
    """Window-length policy going in; per-window record coming out."""

    chunk_length: float
    max_halvings: int = 8
    reports: list = field(default_factory=list)
    junction_times: list = field(default_factory=list)

    def __post_init__(self):
        if not (self.chunk_length > 0 and math.isfinite(self.chunk_length)):
            raise ConfigError(
                f"chunk length must be positive, got {self.chunk_length}"
            )
        if self.max_halvings < 0:
            raise ConfigError(
                f"max halvings must be nonnegative, got {self.max_halvings}"
            )
        if any(
            b <= a for a, b in zip(self.junction_times, self.junction_times[1:])
        ):
            raise ConfigError("junction times must be strictly increasing")


@dataclass
class ContinuationReport:
    """Record of a gamma-descent run.

    plans holds the per-gamma chunk records in gamma order (largest first);
    it is diagnostic plumbing for report writers.
    """

    gammas: tuple
    differences: tuple
    smallness: float
    epsilon0: float
    cauchy: bool
    plans: tuple = ()

    def __post_init__(self):
        gs = tuple(float(g) for g in self.gammas)
        if any(b >= a for a, b in zip(gs, gs[1:])):
            raise ConfigError("gamma sequence must be strictly decreasing")
        if any(not (1.0 < g <= 2.0) for g in gs):
            raise ConfigError("gamma sequence entries must lie in (1, 2]")
        ds = tuple(float(d) for d in self.differences)
        if any(d < 0 for d in ds):
            raise ConfigError("trajectory differences must be nonnegative")
        self.gammas = gs
        self.differences = ds


def default_chunk_length(scenario: Scenario) -> float:
    """Heuristic window length, shrinking as the problem data grow.

    min(1, 1/4 / (1 + kernel norm + sup wind + sup modulation + modulation
    Lipschitz constant)); the adaptive halving in solve_global covers cases
    where this guess is still too long.
    """
    load = (
        scenario.kernel.l2_pairnorm
        + scenario.omega_sup
        + scenario.beta.sup_norm
        + scenario.beta.lip_const
    )
    return min(1.0, 0.25 / (1.0 + load))


def glue(a: Trajectory, b: Trajectory) -> Trajectory:
    """Concatenate two trajectories meeting at a junction.

    b must start where a ends, both in time and node-for-node in value; the
    shared snapshot is stored once. A value mismatch above 1e-12 per node is
    a hard error because a restart is only valid from the exact endpoint.
    """
    problems = []
    if a.grid != b.grid:
        problems.append("trajectories live on different grids")
    if a.dt != b.dt:
        problems.append(f"step sizes differ: {a.dt} vs {b.dt}")
    if abs(b.t0 - a.t_end) > 1e-9 * max(1.0, abs(a.t_end)):
        problems.append(
            f"second trajectory starts at t={b.t0}, first ends at t={a.t_end}"
        )
    if problems:
        raise ConfigError(problems)
    jump = float(np.max(np.abs(a.final.values - b.fields[0].values)))
    if jump > JUNCTION_TOL:
        raise JunctionMismatchError(jump, JUNCTION_TOL)
    return Trajectory(a.grid, a.dt, a.fields + b.fields[1:], a.t0)


def junction_jump(a: Trajectory, b: Trajectory) -> float:
    """Max nodewise gap between a's endpoint and b's start."""
    return float(np.max(np.abs(a.final.values - b.fields[0].values)))


def solve_global(
    scenario: Scenario,
    horizon: float | None = None,
    plan: ChunkPlan | None = None,
) -> tuple:
    """Cover [0, horizon] by restarted window solves.

    Each window is solved by the fixed-point driver from the previous
    endpoint; a nonconverged window is halved (never below dt) and retried
    up to plan.max_halvings times, after which the run aborts carrying the
    partial trajectory. Returns the glued trajectory and a plan whose
    reports and junction times record what actually ran.
    """
    if horizon is None:
        horizon = scenario.horizon
    if not (horizon > 0):
        raise ConfigError(f"horizon must be positive, got {horizon}")
    slack = 1e-9 * max(1.0, abs(scenario.horizon))
    if horizon > scenario.horizon + slack:
        raise ConfigError(
            f"requested horizon {horizon} exceeds the scenario horizon "
            f"{scenario.horizon} that the problem data cover"
        )
    if plan is None:
        plan = ChunkPlan(default_chunk_length(scenario))

    reports: list[PicardReport] = []
    junctions: list[float] = []
    current: Trajectory | None = None
    start_field = scenario.g
    t_cur = 0.0

    while t_cur < horizon - slack:
        span_target = min(plan.chunk_length, horizon - t_cur)
        span = span_target
        halvings = 0
        while True:
            traj, rep = solve_short_time(
                scenario, t0=t_cur, span=span, initial=start_field
            )
            if rep.converged:
                break
            at_floor = span <= scenario.dt * (1.0 + 1e-9)
            if halvings >= plan.max_halvings or at_floor:
                partial_plan = ChunkPlan(
                    plan.chunk_length, plan.max_halvings, reports, junctions
                )
                raise NonconvergenceError(
                    f"window starting at t={t_cur:.6g} did not converge "
                    f"(span {span:.6g}, {halvings} halvings, last residual "
                    f"{rep.residuals[-1]:.3e})",
                    report=rep,
                    partial=current,
                    plan=partial_plan,
                )
            span = max(span / 2.0, scenario.dt)
            halvings += 1
        reports.append(rep)
        if current is None:
            current = traj
        else:
            junctions.append(traj.t0)
            current = glue(current, traj)
        t_cur = traj.t_end
        start_field = traj.final

    if current is None:
        raise ConfigError(
            f"horizon {horizon} is too short to cover with steps of {scenario.dt}"
        )
    out_plan = ChunkPlan(plan.chunk_length, plan.max_halvings, reports, junctions)
    return current, out_plan


def gamma_continuation(scenario: Scenario, gammas) -> tuple:
    """Solve along a decreasing gamma sequence and measure consecutive gaps.

    Only admitted for small problem data: the continuation is meaningful
    when kernel norm + sup wind + sup modulation stays below EPSILON_0.
    Returns the trajectory of the smallest gamma and a report whose
    differences are the space-time L2 distances between consecutive
    solutions; the cauchy flag requires the last distances to be
    nonincreasing and the final one to be below CAUCHY_TOL.
    """
    gs = tuple(float(g) for g in gammas)
    problems = []
    if len(gs) < 3:
        problems.append(f"need at least 3 gamma values, got {len(gs)}")
    if any(b >= a for a, b in zip(gs, gs[1:])):
        problems.append("gamma values must be strictly decreasing")
    if any(not (1.0 < g <= 2.0) for g in gs):
        problems.append("gamma values must lie in (1, 2]")
    if gs and gs[-1] > 1.05:
        problems.append(
            f"the final gamma must be at most 1.05, got {gs[-1]}"
        )
    if problems:
        raise ConfigError(problems)

    k_norm = scenario.kernel.l2_pairnorm
    w_sup = scenario.omega_sup
    b_sup = scenario.beta.sup_norm
    smallness = k_norm + w_sup + b_sup
    if smallness > EPSILON_0:
        raise ConfigError(
            "continuation needs small data: kernel pair norm "
            f"{k_norm:.6g} + sup wind {w_sup:.6g} + sup modulation "
            f"{b_sup:.6g} = {smallness:.6g} exceeds epsilon0 = {EPSILON_0}"
        )

    trajectories = []
    plans = []
    for g_val in gs:
        traj, plan = solve_global(scenario.with_gamma(g_val))
        trajectories.append(traj)
        plans.append(plan)

    differences = tuple(
        spacetime_l2_distance(trajectories[i], trajectories[i + 1])
        for i in range(len(trajectories) - 1)
    )
    tail = differences[-3:]
    nonincreasing = all(
        b <= a + 1e-15 for a, b in zip(tail, tail[1:])
    )
    cauchy = nonincreasing and differences[-1] <= CAUCHY_TOL

    report = ContinuationReport(
        gammas=gs,
        differences=differences,
        smallness=smallness,
        epsilon0=EPSILON_0,
        cauchy=cauchy,
        plans=tuple(plans),
    )
    return trajectories[-1], report
