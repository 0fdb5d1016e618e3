"""Numpy implementation of the hot numerical kernels.

A compiled twin of this module lives in ``_kernels_cy.pyx``; the two expose
identical signatures and ``_backend`` picks one at import time. Keep any
change here mirrored there.

All functions take C-contiguous float64 arrays shaped (nx, ny) and treat the
outer ring of nodes as the Dirichlet boundary: stencil outputs are zero
there and the conjugate-gradient solve never touches it.
"""

import numpy as np


def laplacian(values, hx, hy):
    """5-point Laplacian on interior nodes, zero on the boundary ring."""
    out = np.zeros_like(values)
    out[1:-1, 1:-1] = (
        values[2:, 1:-1] - 2.0 * values[1:-1, 1:-1] + values[:-2, 1:-1]
    ) / (hx * hx) + (
        values[1:-1, 2:] - 2.0 * values[1:-1, 1:-1] + values[1:-1, :-2]
    ) / (hy * hy)
    return out


def gradient(values, hx, hy):
    """Central differences inside, first-order one-sided on the edges."""
    gx = np.gradient(values, hx, axis=0, edge_order=1)
    gy = np.gradient(values, hy, axis=1, edge_order=1)
    return gx, gy


def window_correlate(weighted, window):
    """Correlate a node field with a centered window, zero-padded.

    out[p] = sum_d window[d] * weighted[p + d] on interior nodes p, with
    out-of-grid contributions dropped; boundary rows of the output are zero.
    """
    nx, ny = weighted.shape
    kx, ky = window.shape
    rx, ry = kx // 2, ky // 2
    pad = np.zeros((nx + 2 * rx, ny + 2 * ry))
    pad[rx : rx + nx, ry : ry + ny] = weighted
    out = np.zeros_like(weighted)
    for a in range(kx):
        for b in range(ky):
            w = window[a, b]
            if w != 0.0:
                out += w * pad[a : a + nx, b : b + ny]
    out[0, :] = 0.0
    out[-1, :] = 0.0
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    return out


def shift_apply(values, dt, hx, hy):
    """Apply the backward-Euler operator (I - dt*Laplacian), ring zeroed."""
    out = values - dt * laplacian(values, hx, hy)
    out[0, :] = 0.0
    out[-1, :] = 0.0
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    return out


def cg_shifted_poisson(rhs, dt, hx, hy, tol, maxiter):
    """Solve (I - dt*Laplacian) x = rhs on interior nodes by CG.

    rhs values on the boundary ring are ignored (treated as zero). Returns
    (x, iterations, relative_residual) where the residual is the recurrence
    value; callers wanting a certified residual should re-check with
    shift_apply.
    """
    b = rhs.copy()
    b[0, :] = 0.0
    b[-1, :] = 0.0
    b[:, 0] = 0.0
    b[:, -1] = 0.0
    bnorm = float(np.sqrt(np.sum(b * b)))
    x = np.zeros_like(b)
    if bnorm == 0.0:
        return x, 0, 0.0
    r = b.copy()
    p = r.copy()
    rs = float(np.sum(r * r))
    stop = tol * bnorm
    for it in range(1, maxiter + 1):
        ap = p - dt * laplacian(p, hx, hy)
        alpha = rs / float(np.sum(p * ap))
        x += alpha * p
        r -= alpha * ap
        rs_new = float(np.sum(r * r))
        if np.sqrt(rs_new) <= stop:
            return x, it, float(np.sqrt(rs_new)) / bnorm
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, maxiter, float(np.sqrt(rs)) / bnorm
