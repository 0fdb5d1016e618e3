"""Fire-front extraction: the zero level set of u - theta.

Marching squares over grid cells with linear interpolation along cell
edges. The burning region is where u - theta is strictly positive; a node
value of exactly zero counts as not burning, and an interpolated crossing
that lands on a node is emitted exactly at that node. Saddle cells (both
diagonals positive) are disambiguated by the sign of the cell-center
average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import ScalarField


@dataclass
class FrontContour:
    """Polylines tracing the front at one time; closed loops repeat their
    first point."""

    time: float
    polylines: list

    def __post_init__(self):
        for k, line in enumerate(self.polylines):
            if len(line) < 2:
                raise ConfigError(f"polyline {k} has fewer than 2 points")


def _edge_point(xs, ys, edge, d):
    """Linear zero crossing on the edge, exact at nodes, clamped to the edge."""
    i, j, axis = edge
    if axis == 0:
        d1, d2 = d[i, j], d[i + 1, j]
    else:
        d1, d2 = d[i, j], d[i, j + 1]
    t = d1 / (d1 - d2)
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    if axis == 0:
        return (xs[i] + t * (xs[i + 1] - xs[i]), ys[j])
    return (xs[i], ys[j] + t * (ys[j + 1] - ys[j]))


# case index -> list of (edge_a, edge_b) pairs, edges named B/R/T/L
_PLAIN_CASES = {
    1: [("L", "B")],
    2: [("B", "R")],
    3: [("L", "R")],
    4: [("T", "R")],
    6: [("B", "T")],
    7: [("L", "T")],
    8: [("L", "T")],
    9: [("B", "T")],
    11: [("T", "R")],
    12: [("L", "R")],
    13: [("B", "R")],
    14: [("L", "B")],
}


def extract_front(u: ScalarField, theta: ScalarField, t: float = 0.0) -> FrontContour:
    """Trace the level set u = theta as polylines of (x, y) points.

    Cells whose four corners share one sign produce nothing; an empty
    polyline list is valid output. Chains are assembled deterministically:
    open chains first, then closed loops, each starting from the smallest
    edge index.
    """
    if u.grid != theta.grid:
        raise ConfigError("temperature and threshold must share one grid")
    grid = u.grid
    d = u.values - theta.values
    xs = grid.xs()
    ys = grid.ys()

    pos = d > 0.0
    segments = []
    for i in range(grid.nx - 1):
        for j in range(grid.ny - 1):
            case = (
                (1 if pos[i, j] else 0)
                + (2 if pos[i + 1, j] else 0)
                + (4 if pos[i + 1, j + 1] else 0)
                + (8 if pos[i, j + 1] else 0)
            )
            if case in (0, 15):
                continue
            edges = {
                "B": (i, j, 0),
                "T": (i, j + 1, 0),
                "L": (i, j, 1),
                "R": (i + 1, j, 1),
            }
            if case == 5:
                center = 0.25 * (
                    d[i, j] + d[i + 1, j] + d[i + 1, j + 1] + d[i, j + 1]
                )
                pairs = [("L", "T"), ("B", "R")] if center > 0.0 else [
                    ("L", "B"),
                    ("T", "R"),
                ]
            elif case == 10:
                center = 0.25 * (
                    d[i, j] + d[i + 1, j] + d[i + 1, j + 1] + d[i, j + 1]
                )
                pairs = [("L", "B"), ("T", "R")] if center > 0.0 else [
                    ("L", "T"),
                    ("B", "R"),
                ]
            else:
                pairs = _PLAIN_CASES[case]
            for a, b in pairs:
                segments.append((edges[a], edges[b]))

    polylines = _chain_segments(segments, xs, ys, d)
    return FrontContour(t, polylines)


def _chain_segments(segments, xs, ys, d):
    if not segments:
        return []
    adjacency: dict = {}
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(a, []).append((b, idx))
        adjacency.setdefault(b, []).append((a, idx))
    for nbrs in adjacency.values():
        nbrs.sort()

    used = [False] * len(segments)

    def walk(start):
        chain = [start]
        current = start
        while True:
            step = None
            for nbr, idx in adjacency[current]:
                if not used[idx]:
                    step = (nbr, idx)
                    break
            if step is None:
                return chain
            used[step[1]] = True
            chain.append(step[0])
            current = step[0]

    chains = []
    # open chains start at edges touched by exactly one segment
    for edge in sorted(e for e, nbrs in adjacency.items() if len(nbrs) == 1):
        if any(not used[idx] for _, idx in adjacency[edge]):
            chains.append((walk(edge), False))
    # what remains closes on itself
    for edge in sorted(adjacency):
        if any(not used[idx] for _, idx in adjacency[edge]):
            chains.append((walk(edge), True))

    polylines = []
    for chain, closed in chains:
        pts = [_edge_point(xs, ys, e, d) for e in chain]
        if closed:
            pts.append(pts[0])
        deduped = [pts[0]]
        for p in pts[1:]:
            if p != deduped[-1]:
                deduped.append(p)
        if len(deduped) >= 2:
            polylines.append(deduped)
    return polylines
