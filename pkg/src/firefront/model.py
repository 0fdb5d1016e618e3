"""Problem data and the two nonlinear forcing terms.

A Scenario bundles everything a run needs: the nonlocal ignition kernel, the
ignition threshold field, the wind field, the piecewise-linear modulation
function, the sharpness exponent gamma, initial data, and time controls.
The two forcings are

  ignition:   integral over the domain of (u - theta)_+ weighted by the kernel,
  convection: negative part of (wind . grad u + modulation(u) |grad u|^(2-gamma)),

both evaluated nodewise, zero on the boundary ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConfigError
from .grid import (
    GridSpec,
    ScalarField,
    VectorField,
    boundary_max_abs,
    gradient,
    quadrature_weights,
)


class Kernel:
    """Nonlocal coupling between node pairs.

    Two storage variants: a full matrix over all node pairs (row-major node
    flattening), or a translation-invariant stencil window applied by
    correlation. Both paths weight the source field with the trapezoidal
    quadrature weights, so applying the kernel is a discrete integral over
    the domain. l2_pairnorm is the quadrature approximation of the L2 norm
    of the kernel over domain x domain.
    """

    __slots__ = ("grid", "variant", "matrix", "window", "l2_pairnorm")

    def __init__(self, grid, variant, matrix=None, window=None):
        if variant not in ("dense", "stencil"):
            raise ConfigError(f"unknown kernel variant {variant!r}")
        self.grid = grid
        self.variant = variant
        n = grid.n_nodes
        w = quadrature_weights(grid)
        if variant == "dense":
            m = np.ascontiguousarray(matrix, dtype=np.float64)
            if m.shape != (n, n):
                raise ConfigError(
                    f"dense kernel matrix must be {n}x{n} for a "
                    f"{grid.nx}x{grid.ny} grid, got {m.shape}"
                )
            if not np.all(np.isfinite(m)):
                raise ConfigError("kernel matrix contains non-finite entries")
            self.matrix = m
            self.window = None
            wf = w.ravel()
            self.l2_pairnorm = float(np.sqrt(wf @ (m * m) @ wf))
        else:
            win = np.ascontiguousarray(window, dtype=np.float64)
            if win.ndim != 2 or win.shape[0] % 2 == 0 or win.shape[1] % 2 == 0:
                raise ConfigError(
                    f"stencil window must be 2-d with odd side lengths, got shape {win.shape}"
                )
            if not np.all(np.isfinite(win)):
                raise ConfigError("stencil window contains non-finite entries")
            self.matrix = None
            self.window = win
            self.l2_pairnorm = float(np.sqrt(self._stencil_pairnorm_sq(w, win)))

    @staticmethod
    def _stencil_pairnorm_sq(w, win):
        # sum over offsets d of win[d]^2 * sum over in-range node pairs of w_p * w_{p+d}
        nx, ny = w.shape
        rx = win.shape[0] // 2
        ry = win.shape[1] // 2
        total = 0.0
        for di in range(-rx, rx + 1):
            i0, i1 = max(0, -di), min(nx, nx - di)
            if i0 >= i1:
                continue
            for dj in range(-ry, ry + 1):
                c = win[di + rx, dj + ry]
                if c == 0.0:
                    continue
                j0, j1 = max(0, -dj), min(ny, ny - dj)
                if j0 >= j1:
                    continue
                overlap = np.sum(
                    w[i0:i1, j0:j1] * w[i0 + di : i1 + di, j0 + dj : j1 + dj]
                )
                total += c * c * overlap
        return total

    @classmethod
    def dense(cls, grid, matrix):
        return cls(grid, "dense", matrix=matrix)

    @classmethod
    def stencil(cls, grid, window):
        return cls(grid, "stencil", window=window)

    @classmethod
    def zero(cls, grid):
        return cls(grid, "stencil", window=np.zeros((1, 1)))

    def apply(self, excess: np.ndarray) -> np.ndarray:
        """Integrate excess against the kernel; output ring is zero.

        excess is a node array (already thresholded by the caller); it is
        multiplied by the quadrature weights before the pairing.
        """
        w = quadrature_weights(self.grid)
        weighted = w * excess
        if self.variant == "stencil":
            return _backend.window_correlate(weighted, self.window)
        out = (self.matrix @ weighted.ravel()).reshape(self.grid.shape)
        out[0, :] = 0.0
        out[-1, :] = 0.0
        out[:, 0] = 0.0
        out[:, -1] = 0.0
        return out

    def dense_matrix(self) -> np.ndarray:
        """Full pairwise matrix; expands the stencil variant on demand."""
        if self.variant == "dense":
            return self.matrix.copy()
        nx, ny = self.grid.shape
        n = self.grid.n_nodes
        win = self.window
        rx = win.shape[0] // 2
        ry = win.shape[1] // 2
        m = np.zeros((n, n))
        for di in range(-rx, rx + 1):
            i0, i1 = max(0, -di), min(nx, nx - di)
            if i0 >= i1:
                continue
            for dj in range(-ry, ry + 1):
                c = win[di + rx, dj + ry]
                if c == 0.0:
                    continue
                j0, j1 = max(0, -dj), min(ny, ny - dj)
                if j0 >= j1:
                    continue
                ii, jj = np.meshgrid(
                    np.arange(i0, i1), np.arange(j0, j1), indexing="ij"
                )
                p = (ii * ny + jj).ravel()
                q = ((ii + di) * ny + (jj + dj)).ravel()
                m[p, q] = c
        return m

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        if self.grid != other.grid or self.variant != other.variant:
            return False
        if self.variant == "dense":
            return np.array_equal(self.matrix, other.matrix)
        return np.array_equal(self.window, other.window)

    __hash__ = None

    def __repr__(self):
        return f"Kernel({self.variant}, norm={self.l2_pairnorm:.6g})"


class BetaFunction:
    """Piecewise-linear modulation of the front speed by local temperature.

    Defined by a breakpoint table, extended as a constant beyond the first
    and last breakpoints. sup_norm and lip_const are exact for this class,
    which the inequality checkers rely on.
    """

    __slots__ = ("breakpoints", "values", "sup_norm", "lip_const")

    def __init__(self, breakpoints, values):
        bp = np.ascontiguousarray(breakpoints, dtype=np.float64)
        vals = np.ascontiguousarray(values, dtype=np.float64)
        if bp.ndim != 1 or bp.size < 2:
            raise ConfigError("modulation table needs at least 2 breakpoints")
        if vals.shape != bp.shape:
            raise ConfigError(
                f"modulation table has {bp.size} breakpoints but {vals.size} values"
            )
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(vals))):
            raise ConfigError("modulation table contains non-finite entries")
        if np.any(np.diff(bp) <= 0):
            raise ConfigError("modulation breakpoints must be strictly increasing")
        self.breakpoints = bp
        self.values = vals
        self.sup_norm = float(np.max(np.abs(vals)))
        self.lip_const = float(np.max(np.abs(np.diff(vals) / np.diff(bp))))

    @classmethod
    def constant(cls, c):
        return cls([0.0, 1.0], [float(c), float(c)])

    def __call__(self, u):
        return np.interp(u, self.breakpoints, self.values)

    def __eq__(self, other):
        return (
            isinstance(other, BetaFunction)
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"BetaFunction({self.breakpoints.size} pts, "
            f"sup={self.sup_norm:.6g}, lip={self.lip_const:.6g})"
        )


class TimeSamples:
    """Piecewise-constant-in-time sequence of fields.

    Sample k is active on [times[k], times[k+1]); the last sample extends to
    the end of the run. The first sample time must be 0.
    """

    __slots__ = ("times", "items")

    def __init__(self, times, items):
        t = np.ascontiguousarray(times, dtype=np.float64)
        items = list(items)
        if t.ndim != 1 or t.size == 0:
            raise ConfigError("time-sampled data needs at least one sample")
        if t.size != len(items):
            raise ConfigError(
                f"{t.size} sample times but {len(items)} sampled fields"
            )
        if t[0] != 0.0:
            raise ConfigError("the first sample time must be 0")
        if np.any(np.diff(t) <= 0):
            raise ConfigError("sample times must be strictly increasing")
        self.times = t
        self.items = items

    def at(self, t):
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.items[max(i, 0)]

    def __eq__(self, other):
        return (
            isinstance(other, TimeSamples)
            and np.array_equal(self.times, other.times)
            and self.items == other.items
        )

    __hash__ = None

    def __len__(self):
        return len(self.items)


def _as_samples(data, kind):
    if isinstance(data, TimeSamples):
        return data
    if isinstance(data, kind):
        return TimeSamples([0.0], [data])
    raise ConfigError(
        f"expected a {kind.__name__} or TimeSamples of them, got {type(data).__name__}"
    )


@dataclass
class Scenario:
    """Complete problem description for one run."""

    grid: GridSpec
    kernel: Kernel
    theta: object  # ScalarField or TimeSamples of them
    omega: object  # VectorField or TimeSamples of them
    beta: BetaFunction
    gamma: float
    g: ScalarField
    horizon: float
    dt: float
    picard_tol: float = 1e-8
    picard_maxit: int = 50
    theta_neg_sup: float = field(init=False, compare=False, default=0.0)
    omega_sup: float = field(init=False, compare=False, default=0.0)

    def __post_init__(self):
        problems = []
        if not (1.0 <= self.gamma <= 2.0):
            problems.append(f"gamma must lie in [1, 2], got {self.gamma}")
        if not (self.horizon > 0):
            problems.append(f"horizon must be positive, got {self.horizon}")
        if not (0 < self.dt <= self.horizon):
            problems.append(
                f"dt must satisfy 0 < dt <= horizon, got dt={self.dt}, "
                f"horizon={self.horizon}"
            )
        if not (self.picard_tol > 0):
            problems.append(f"picard_tol must be positive, got {self.picard_tol}")
        if self.picard_maxit < 1:
            problems.append(
                f"picard_maxit must be at least 1, got {self.picard_maxit}"
            )
        if self.kernel.grid != self.grid:
            problems.append("kernel grid does not match the scenario grid")
        if self.g.grid != self.grid:
            problems.append("initial field grid does not match the scenario grid")
        elif boundary_max_abs(self.g) != 0.0:
            problems.append("initial field must be exactly zero on the boundary ring")
        if problems:
            raise ConfigError(problems)

        self.theta = _as_samples(self.theta, ScalarField)
        self.omega = _as_samples(self.omega, VectorField)
        for f in self.theta.items:
            if f.grid != self.grid:
                raise ConfigError("threshold field grid does not match the scenario grid")
        for v in self.omega.items:
            if v.grid != self.grid:
                raise ConfigError("wind field grid does not match the scenario grid")

        self.theta_neg_sup = float(
            max(np.max(np.maximum(-f.values, 0.0)) for f in self.theta.items)
        )
        self.omega_sup = float(max(np.max(v.magnitude()) for v in self.omega.items))

    @property
    def steps(self) -> int:
        """Number of backward time steps covering [0, horizon].

        ceil(horizon / dt), guarded against float noise when horizon is an
        exact multiple of dt.
        """
        return max(1, math.ceil(self.horizon / self.dt - 1e-9))

    def theta_at(self, t) -> ScalarField:
        return self.theta.at(t)

    def omega_at(self, t) -> VectorField:
        return self.omega.at(t)

    def data_l2_budget(self) -> float:
        """kernel pair norm + sup wind speed + sup modulation; the smallness
        quantity that gates the continuation path."""
        return self.kernel.l2_pairnorm + self.omega_sup + self.beta.sup_norm

    def with_gamma(self, gamma) -> "Scenario":
        return Scenario(
            grid=self.grid,
            kernel=self.kernel,
            theta=self.theta,
            omega=self.omega,
            beta=self.beta,
            gamma=float(gamma),
            g=self.g,
            horizon=self.horizon,
            dt=self.dt,
            picard_tol=self.picard_tol,
            picard_maxit=self.picard_maxit,
        )


def _require_same_grid(grid, *others):
    for other in others:
        if other != grid:
            raise ConfigError("fields in a forcing evaluation must share one grid")


def ignition_forcing(u: ScalarField, theta: ScalarField, kernel: Kernel) -> ScalarField:
    """Nonlocal heating: the kernel integrated against (u - theta)_+."""
    _require_same_grid(u.grid, theta.grid, kernel.grid)
    excess = np.maximum(u.values - theta.values, 0.0)
    return ScalarField(u.grid, kernel.apply(excess))


def convection_forcing(
    u: ScalarField, omega: VectorField, beta: BetaFunction, gamma: float
) -> ScalarField:
    """Wind-driven heating: negative part of the transport speed along grad u.

    Pointwise argument is omega . grad u + beta(u) |grad u|^(2-gamma); nodes
    with a vanishing gradient contribute no modulation term for any gamma.
    Output is nonnegative and zero on the boundary ring.
    """
    if not (1.0 <= gamma <= 2.0):
        raise ConfigError(f"gamma must lie in [1, 2], got {gamma}")
    _require_same_grid(u.grid, omega.grid)
    grad = gradient(u)
    mag = np.hypot(grad.x, grad.y)
    # mag ** 0.0 evaluates to 1 at mag == 0, so mask before use
    powterm = np.where(mag > 0.0, mag ** (2.0 - gamma), 0.0)
    arg = omega.x * grad.x + omega.y * grad.y + beta(u.values) * powterm
    out = np.maximum(-arg, 0.0)
    out[0, :] = 0.0
    out[-1, :] = 0.0
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    return ScalarField(u.grid, out)


def total_forcing(u: ScalarField, t: float, scenario: Scenario) -> ScalarField:
    """Sum of the ignition and convection forcings with data sampled at t."""
    slack = 1e-9 * max(1.0, abs(scenario.horizon))
    if t < -slack or t > scenario.horizon + slack:
        raise ValueError(
            f"time {t} is outside the run interval [0, {scenario.horizon}]"
        )
    ign = ignition_forcing(u, scenario.theta_at(t), scenario.kernel)
    conv = convection_forcing(u, scenario.omega_at(t), scenario.beta, scenario.gamma)
    return ScalarField(u.grid, ign.values + conv.values)
