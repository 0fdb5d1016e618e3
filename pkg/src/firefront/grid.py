"""Rectangle grid, stencils, quadrature, and discrete norms.

Every other module funnels through the conventions pinned here: a
node-centered grid on an axis-aligned rectangle, 5-point Laplacian zeroed on
the boundary ring, central-difference gradient with one-sided edges, and
trapezoidal quadrature. The L2 and H1 norms are the quadrature norms of
those objects, so the inequality checkers can rely on exact discrete
identities (Cauchy-Schwarz and friends hold verbatim for weighted sums).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from .errors import ConfigError


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned rectangle [0, lx] x [0, ly] sampled at nx x ny nodes."""

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ConfigError(
                f"grid needs at least 3 nodes per axis, got {self.nx}x{self.ny}"
            )
        if not (math.isfinite(self.lx) and math.isfinite(self.ly)):
            raise ConfigError("grid side lengths must be finite")
        if self.lx <= 0 or self.ly <= 0:
            raise ConfigError(
                f"grid side lengths must be positive, got lx={self.lx}, ly={self.ly}"
            )

    @property
    def hx(self) -> float:
        return self.lx / (self.nx - 1)

    @property
    def hy(self) -> float:
        return self.ly / (self.ny - 1)

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @property
    def n_nodes(self) -> int:
        return self.nx * self.ny

    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.lx, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(0.0, self.ly, self.ny)

    def meshgrid(self):
        """Node coordinate arrays X, Y, both shaped (nx, ny)."""
        return np.meshgrid(self.xs(), self.ys(), indexing="ij")


@lru_cache(maxsize=32)
def quadrature_weights(grid: GridSpec) -> np.ndarray:
    """Trapezoidal node weights: hx*hy times 1 / 1/2 / 1/4 (interior/edge/corner)."""
    cx = np.ones(grid.nx)
    cx[0] = cx[-1] = 0.5
    cy = np.ones(grid.ny)
    cy[0] = cy[-1] = 0.5
    w = (grid.hx * grid.hy) * np.outer(cx, cy)
    w.flags.writeable = False
    return w


def _as_node_array(grid, values, what):
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.shape != grid.shape:
        raise ConfigError(
            f"{what} has shape {arr.shape}, expected {grid.shape} for this grid"
        )
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{what} contains non-finite values")
    return arr


class ScalarField:
    """One real value per node. Treated as immutable once constructed."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values):
        self.grid = grid
        self.values = _as_node_array(grid, values, "scalar field")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid, value):
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid, fn):
        """Sample fn(x, y) at the nodes (fn must broadcast over arrays)."""
        xx, yy = grid.meshgrid()
        return cls(grid, fn(xx, yy))

    def copy(self):
        return ScalarField(self.grid, self.values.copy())

    def __eq__(self, other):
        return (
            isinstance(other, ScalarField)
            and self.grid == other.grid
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"ScalarField({self.grid.nx}x{self.grid.ny})"


class VectorField:
    """Two reals per node (x- and y-components)."""

    __slots__ = ("grid", "x", "y")

    def __init__(self, grid: GridSpec, x, y):
        self.grid = grid
        self.x = _as_node_array(grid, x, "vector field x-component")
        self.y = _as_node_array(grid, y, "vector field y-component")

    @classmethod
    def zeros(cls, grid):
        z = np.zeros(grid.shape)
        return cls(grid, z, z.copy())

    @classmethod
    def constant(cls, grid, vx, vy):
        return cls(
            grid,
            np.full(grid.shape, float(vx)),
            np.full(grid.shape, float(vy)),
        )

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.x, self.y)

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and self.grid == other.grid
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )

    __hash__ = None

    def __repr__(self):
        return f"VectorField({self.grid.nx}x{self.grid.ny})"


def eigenmode(grid: GridSpec, amplitude=1.0) -> ScalarField:
    """amplitude * sin(pi x / lx) * sin(pi y / ly), boundary ring exactly zero.

    The lowest Dirichlet mode of the rectangle; it is also an exact
    eigenvector of the 5-point Laplacian, which several oracle tests use.
    """
    xx, yy = grid.meshgrid()
    vals = amplitude * np.sin(np.pi * xx / grid.lx) * np.sin(np.pi * yy / grid.ly)
    vals[0, :] = 0.0
    vals[-1, :] = 0.0
    vals[:, 0] = 0.0
    vals[:, -1] = 0.0
    return ScalarField(grid, vals)


def zero_boundary_ring(values: np.ndarray) -> np.ndarray:
    """Return a copy with the outer ring set exactly to zero."""
    out = np.array(values, dtype=np.float64, copy=True)
    out[0, :] = 0.0
    out[-1, :] = 0.0
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    return out


def boundary_max_abs(field: ScalarField) -> float:
    v = field.values
    return float(
        max(
            np.max(np.abs(v[0, :])),
            np.max(np.abs(v[-1, :])),
            np.max(np.abs(v[:, 0])),
            np.max(np.abs(v[:, -1])),
        )
    )


def gradient(f: ScalarField) -> VectorField:
    """Discrete gradient: central inside, first-order one-sided on the ring."""
    gx, gy = _backend.gradient(f.values, f.grid.hx, f.grid.hy)
    return VectorField(f.grid, gx, gy)


def laplacian(f: ScalarField) -> ScalarField:
    """5-point Laplacian at interior nodes; boundary output is zero."""
    return ScalarField(f.grid, _backend.laplacian(f.values, f.grid.hx, f.grid.hy))


def integrate(f: ScalarField) -> float:
    """Trapezoidal quadrature over the rectangle."""
    return float(np.sum(quadrature_weights(f.grid) * f.values))


def l2_norm(f: ScalarField) -> float:
    w = quadrature_weights(f.grid)
    return float(np.sqrt(np.sum(w * f.values * f.values)))


def h1_seminorm(f: ScalarField) -> float:
    g = gradient(f)
    w = quadrature_weights(f.grid)
    return float(np.sqrt(np.sum(w * (g.x * g.x + g.y * g.y))))


def h1_norm(f: ScalarField) -> float:
    return float(np.hypot(l2_norm(f), h1_seminorm(f)))


def positive_part(a):
    """max(a, 0); accepts scalars or arrays."""
    return np.maximum(a, 0.0)


def negative_part(a):
    """max(-a, 0); accepts scalars or arrays. a == positive_part - negative_part."""
    return np.maximum(-a, 0.0)
