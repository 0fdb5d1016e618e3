"""Executable checkers for the discrete inequality toolbox.

Every bound the solver's correctness argument leans on is restated here as
a computable check over quadrature norms. Each proof step (Cauchy-Schwarz,
Hoelder pairings, Lipschitz continuity of the positive and negative parts,
the power-difference estimate) is valid verbatim for weighted finite sums,
so these checks hold to rounding error on every input: a failure means an
implementation bug, not discretization error. Constants are assembled
explicitly from the proof chain, never fitted.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import (
    GridSpec,
    ScalarField,
    VectorField,
    gradient,
    l2_norm,
    quadrature_weights,
)
from .model import BetaFunction, Kernel, convection_forcing, ignition_forcing

REL_SLACK = 1e-10
POWER_REL_SLACK = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """One evaluated inequality: lhs <= rhs up to slack."""

    name: str
    lhs: float
    rhs: float
    slack: float
    grid: str = ""

    def __post_init__(self):
        for label, val in (("lhs", self.lhs), ("rhs", self.rhs), ("slack", self.slack)):
            if not math.isfinite(val):
                raise ConfigError(f"check {self.name!r} produced non-finite {label}")

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.slack


def _result(name, lhs, rhs, rel_slack, grid=""):
    slack = rel_slack * max(1.0, abs(lhs), abs(rhs))
    return CheckResult(name, float(lhs), float(rhs), slack, grid)


def check_ignition_bound(u: ScalarField, theta: ScalarField, kernel: Kernel) -> CheckResult:
    """Squared size of the ignition forcing against the data.

    lhs = squared L2 norm of the forcing; rhs = 2 * kernel pair norm squared
    * (squared L2 norm of u + domain area * squared sup of the threshold's
    negative part).
    """
    f = ignition_forcing(u, theta, kernel)
    lhs = l2_norm(f) ** 2
    theta_neg_sup = float(np.max(np.maximum(-theta.values, 0.0)))
    rhs = (
        2.0
        * kernel.l2_pairnorm ** 2
        * (l2_norm(u) ** 2 + u.grid.area * theta_neg_sup ** 2)
    )
    return _result("ignition_bound", lhs, rhs, REL_SLACK)


def check_convection_bound(
    u: ScalarField, omega: VectorField, beta: BetaFunction, gamma: float
) -> CheckResult:
    """Size of the convection forcing against wind and modulation.

    lhs = L2 norm of the forcing; rhs = sqrt(2) * (sup wind * gradient norm
    + sup modulation * area^((gamma-1)/2) * gradient norm^(2-gamma)). The
    single formula covers gamma = 2 as well, where the last power is 1.
    """
    f = convection_forcing(u, omega, beta, gamma)
    lhs = l2_norm(f)
    w = quadrature_weights(u.grid)
    grad = gradient(u)
    grad_norm = float(np.sqrt(np.sum(w * (grad.x ** 2 + grad.y ** 2))))
    omega_sup = float(np.max(omega.magnitude()))
    rhs = math.sqrt(2.0) * (
        omega_sup * grad_norm
        + beta.sup_norm
        * u.grid.area ** ((gamma - 1.0) / 2.0)
        * grad_norm ** (2.0 - gamma)
    )
    return _result("convection_bound", lhs, rhs, REL_SLACK)


def check_ignition_lipschitz(
    u: ScalarField, v: ScalarField, theta: ScalarField, kernel: Kernel
) -> CheckResult:
    """Stability of the ignition forcing in its temperature argument.

    lhs = L2 norm of the forcing difference; rhs = kernel pair norm * L2
    norm of u - v.
    """
    fu = ignition_forcing(u, theta, kernel)
    fv = ignition_forcing(v, theta, kernel)
    lhs = l2_norm(ScalarField(u.grid, fu.values - fv.values))
    rhs = kernel.l2_pairnorm * l2_norm(ScalarField(u.grid, u.values - v.values))
    return _result("ignition_lipschitz", lhs, rhs, REL_SLACK)


def check_convection_lipschitz(
    u: ScalarField, v: ScalarField, omega: VectorField, beta: BetaFunction, gamma: float
) -> CheckResult:
    """Stability of the convection forcing in its temperature argument.

    For gamma in (1, 2): lhs = L2 norm of the forcing difference, rhs =
    C * (grad-diff norm + grad-diff norm^(2-gamma) + grad(u) norm^(2-gamma)
    * diff norm^(gamma-1)) with C the largest of sup wind, sup modulation *
    area^((gamma-1)/2), and (2 sup modulation)^(2-gamma) * lip^(gamma-1).
    For gamma = 2 the bound collapses to sqrt(2) * max(sup wind, lip) *
    the H1 norm of the difference; it presumes the gradients do not vanish
    at nodes where the modulation acts, which holds for generic fields.
    """
    fu = convection_forcing(u, omega, beta, gamma)
    fv = convection_forcing(v, omega, beta, gamma)
    lhs = l2_norm(ScalarField(u.grid, fu.values - fv.values))

    d = ScalarField(u.grid, u.values - v.values)
    w = quadrature_weights(u.grid)
    gd = gradient(d)
    grad_diff = float(np.sqrt(np.sum(w * (gd.x ** 2 + gd.y ** 2))))
    diff = l2_norm(d)
    omega_sup = float(np.max(omega.magnitude()))

    if gamma == 2.0:
        c = math.sqrt(2.0) * max(omega_sup, beta.lip_const)
        rhs = c * math.hypot(diff, grad_diff)
        return _result("convection_lipschitz", lhs, rhs, REL_SLACK)

    gu = gradient(u)
    grad_u = float(np.sqrt(np.sum(w * (gu.x ** 2 + gu.y ** 2))))
    area = u.grid.area
    c = max(
        omega_sup,
        beta.sup_norm * area ** ((gamma - 1.0) / 2.0),
        (2.0 * beta.sup_norm) ** (2.0 - gamma) * beta.lip_const ** (gamma - 1.0),
    )
    rhs = c * (
        grad_diff
        + grad_diff ** (2.0 - gamma)
        + grad_u ** (2.0 - gamma) * diff ** (gamma - 1.0)
    )
    return _result("convection_lipschitz", lhs, rhs, REL_SLACK)


def check_modulation_holder(
    u: ScalarField, v: ScalarField, beta: BetaFunction, gamma: float
) -> CheckResult:
    """Hoelder control of the modulation mismatch weighted by the gradient.

    lhs = integral of |beta(u) - beta(v)|^2 |grad u|^(2(2-gamma)); rhs =
    C * gradient norm^(2(2-gamma)) * diff norm^(2(gamma-1)) with C =
    (2 sup modulation)^(2(2-gamma)) * lip^(2(gamma-1)). Uses the
    interpolation min(2 sup, lip |u-v|) <= (2 sup)^(2-gamma) (lip|u-v|)^(gamma-1)
    followed by the Hoelder pairing 1/(gamma-1) + 1/(2-gamma).
    """
    w = quadrature_weights(u.grid)
    gu = gradient(u)
    mag = np.hypot(gu.x, gu.y)
    expo = 2.0 * (2.0 - gamma)
    weight = np.where(mag > 0.0, mag ** expo, 0.0 if expo > 0.0 else 1.0)
    mismatch = beta(u.values) - beta(v.values)
    lhs = float(np.sum(w * mismatch ** 2 * weight))

    grad_u = float(np.sqrt(np.sum(w * (gu.x ** 2 + gu.y ** 2))))
    diff = l2_norm(ScalarField(u.grid, u.values - v.values))
    c = (2.0 * beta.sup_norm) ** (2.0 * (2.0 - gamma)) * beta.lip_const ** (
        2.0 * (gamma - 1.0)
    )
    rhs = c * grad_u ** expo * diff ** (2.0 * (gamma - 1.0))
    return _result("modulation_holder", lhs, rhs, REL_SLACK)


def check_power_difference(a: float, b: float, gamma: float) -> CheckResult:
    """|a^(2-gamma) - b^(2-gamma)| <= |a - b|^(2-gamma) for a, b >= 0.

    The right-hand side uses the convention 0^0 := 1, which is the limit
    form of the inequality at gamma = 2.
    """
    if a < 0 or b < 0:
        raise ConfigError(f"power difference needs nonnegative inputs, got {a}, {b}")
    expo = 2.0 - gamma
    lhs = abs(a ** expo - b ** expo)
    rhs = abs(a - b) ** expo
    return _result("power_difference", lhs, rhs, POWER_REL_SLACK)


def power_difference_margins(a, b, gamma) -> np.ndarray:
    """Vectorized margins rhs - lhs of check_power_difference."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    expo = 2.0 - np.asarray(gamma, dtype=np.float64)
    lhs = np.abs(a ** expo - b ** expo)
    rhs = np.abs(a - b) ** expo
    return rhs - lhs


def check_sublinear_growth(x: float, gamma: float) -> CheckResult:
    """x^(2-gamma) <= (2-gamma) x + (gamma-1) for x >= 0.

    The weighted arithmetic-geometric mean with weights 2-gamma and
    gamma-1; in particular the left side grows at most linearly.
    """
    if x < 0:
        raise ConfigError(f"sublinear growth check needs x >= 0, got {x}")
    lhs = x ** (2.0 - gamma)
    rhs = (2.0 - gamma) * x + (gamma - 1.0)
    return _result("sublinear_growth", lhs, rhs, REL_SLACK)


def random_smooth_field(rng, grid: GridSpec, amplitude: float = 1.0) -> ScalarField:
    """Node-wise uniform noise in [-amplitude, amplitude], smoothed by one
    5-point averaging pass, boundary ring zeroed."""
    raw = rng.uniform(-amplitude, amplitude, size=grid.shape)
    out = raw.copy()
    out[1:-1, 1:-1] = (
        raw[1:-1, 1:-1]
        + raw[:-2, 1:-1]
        + raw[2:, 1:-1]
        + raw[1:-1, :-2]
        + raw[1:-1, 2:]
    ) / 5.0
    out[0, :] = 0.0
    out[-1, :] = 0.0
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    return ScalarField(grid, out)


def random_wind(rng, grid: GridSpec, amplitude: float = 1.0) -> VectorField:
    return VectorField(
        grid,
        random_smooth_field(rng, grid, amplitude).values,
        random_smooth_field(rng, grid, amplitude).values,
    )


def random_kernel(rng, grid: GridSpec, amplitude: float = 1.0, stencil: bool = False) -> Kernel:
    if stencil:
        window = rng.uniform(-amplitude, amplitude, size=(3, 3))
        return Kernel.stencil(grid, window)
    n = grid.n_nodes
    return Kernel.dense(grid, rng.uniform(-amplitude, amplitude, size=(n, n)))


def random_modulation(rng, amplitude: float = 1.0) -> BetaFunction:
    gaps = rng.uniform(0.1, 1.0, size=3)
    breakpoints = -1.5 + np.concatenate(([0.0], np.cumsum(gaps)))
    values = rng.uniform(-amplitude, amplitude, size=4)
    return BetaFunction(breakpoints, values)


def run_suite(
    seed: int = 42,
    grid_sizes=(17,),
    count: int = 1000,
    gammas=(1.1, 1.5, 2.0),
) -> list:
    """Randomized sweep of every checker; deterministic under the seed.

    Returns the flat list of results over all grids and repetitions. Scalar
    checks draw a in (0, 1000], b in (0, 1000], x in [0, 1e6]; field checks
    use smoothed random data and cycle gamma through the given tuple, with
    every third repetition using a stencil kernel instead of a dense one.
    """
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    for size in grid_sizes:
        grid = GridSpec(int(size), int(size))
        label = f"{grid.nx}x{grid.ny}"
        for i in range(count):
            gamma = float(gammas[i % len(gammas)])
            u = random_smooth_field(rng, grid)
            v = random_smooth_field(rng, grid)
            theta = random_smooth_field(rng, grid)
            omega = random_wind(rng, grid)
            kernel = random_kernel(rng, grid, stencil=(i % 3 == 2))
            beta = random_modulation(rng)

            a = (1.0 - rng.uniform()) * 1000.0
            b = (1.0 - rng.uniform()) * 1000.0
            x = rng.uniform(0.0, 1e6)

            batch = [
                check_ignition_bound(u, theta, kernel),
                check_convection_bound(u, omega, beta, gamma),
                check_ignition_lipschitz(u, v, theta, kernel),
                check_convection_lipschitz(u, v, omega, beta, gamma),
                check_modulation_holder(u, v, beta, gamma),
                check_power_difference(a, b, gamma),
                check_sublinear_growth(x, gamma),
            ]
            results.extend(
                CheckResult(r.name, r.lhs, r.rhs, r.slack, label) for r in batch
            )
    return results


def write_suite_csv(results, path, seed: int) -> None:
    """Columns: name, lhs, rhs, margin, pass, seed, grid."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "lhs", "rhs", "margin", "pass", "seed", "grid"])
        for r in results:
            writer.writerow(
                [
                    r.name,
                    repr(r.lhs),
                    repr(r.rhs),
                    repr(r.margin),
                    "true" if r.passed else "false",
                    seed,
                    r.grid,
                ]
            )
