# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_np``; same signatures."""

from libc.math cimport sqrt

import numpy as np


def laplacian(double[:, ::1] values, double hx, double hy):
    cdef Py_ssize_t nx = values.shape[0]
    cdef Py_ssize_t ny = values.shape[1]
    cdef double cx = 1.0 / (hx * hx)
    cdef double cy = 1.0 / (hy * hy)
    out_arr = np.zeros((nx, ny))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            out[i, j] = (values[i + 1, j] - 2.0 * values[i, j] + values[i - 1, j]) * cx \
                + (values[i, j + 1] - 2.0 * values[i, j] + values[i, j - 1]) * cy
    return out_arr


def gradient(double[:, ::1] values, double hx, double hy):
    cdef Py_ssize_t nx = values.shape[0]
    cdef Py_ssize_t ny = values.shape[1]
    gx_arr = np.empty((nx, ny))
    gy_arr = np.empty((nx, ny))
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    cdef double inv2x = 1.0 / (2.0 * hx)
    cdef double inv2y = 1.0 / (2.0 * hy)
    cdef double invx = 1.0 / hx
    cdef double invy = 1.0 / hy
    cdef Py_ssize_t i, j
    for i in range(nx):
        for j in range(ny):
            if i == 0:
                gx[i, j] = (values[1, j] - values[0, j]) * invx
            elif i == nx - 1:
                gx[i, j] = (values[nx - 1, j] - values[nx - 2, j]) * invx
            else:
                gx[i, j] = (values[i + 1, j] - values[i - 1, j]) * inv2x
            if j == 0:
                gy[i, j] = (values[i, 1] - values[i, 0]) * invy
            elif j == ny - 1:
                gy[i, j] = (values[i, ny - 1] - values[i, ny - 2]) * invy
            else:
                gy[i, j] = (values[i, j + 1] - values[i, j - 1]) * inv2y
    return gx_arr, gy_arr


def window_correlate(double[:, ::1] weighted, double[:, ::1] window):
    cdef Py_ssize_t nx = weighted.shape[0]
    cdef Py_ssize_t ny = weighted.shape[1]
    cdef Py_ssize_t kx = window.shape[0]
    cdef Py_ssize_t ky = window.shape[1]
    cdef Py_ssize_t rx = kx // 2
    cdef Py_ssize_t ry = ky // 2
    out_arr = np.zeros((nx, ny))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, a, b, qi, qj
    cdef double acc
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            acc = 0.0
            for a in range(kx):
                qi = i + a - rx
                if qi < 0 or qi >= nx:
                    continue
                for b in range(ky):
                    qj = j + b - ry
                    if qj < 0 or qj >= ny:
                        continue
                    acc += window[a, b] * weighted[qi, qj]
            out[i, j] = acc
    return out_arr


def shift_apply(double[:, ::1] values, double dt, double hx, double hy):
    cdef Py_ssize_t nx = values.shape[0]
    cdef Py_ssize_t ny = values.shape[1]
    cdef double cx = dt / (hx * hx)
    cdef double cy = dt / (hy * hy)
    out_arr = np.zeros((nx, ny))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            out[i, j] = values[i, j] \
                - (values[i + 1, j] - 2.0 * values[i, j] + values[i - 1, j]) * cx \
                - (values[i, j + 1] - 2.0 * values[i, j] + values[i, j - 1]) * cy
    return out_arr


def cg_shifted_poisson(double[:, ::1] rhs, double dt, double hx, double hy,
                       double tol, Py_ssize_t maxiter):
    cdef Py_ssize_t nx = rhs.shape[0]
    cdef Py_ssize_t ny = rhs.shape[1]
    cdef double cx = dt / (hx * hx)
    cdef double cy = dt / (hy * hy)
    x_arr = np.zeros((nx, ny))
    cdef double[:, ::1] x = x_arr
    r_arr = np.zeros((nx, ny))
    cdef double[:, ::1] r = r_arr
    p_arr = np.zeros((nx, ny))
    cdef double[:, ::1] p = p_arr
    ap_arr = np.zeros((nx, ny))
    cdef double[:, ::1] ap = ap_arr
    cdef double bnorm2 = 0.0
    cdef Py_ssize_t i, j
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            r[i, j] = rhs[i, j]
            p[i, j] = rhs[i, j]
            bnorm2 += rhs[i, j] * rhs[i, j]
    if bnorm2 == 0.0:
        return x_arr, 0, 0.0
    cdef double bnorm = sqrt(bnorm2)
    cdef double stop = tol * bnorm
    cdef double rs = bnorm2
    cdef double rs_new, alpha, pap
    cdef Py_ssize_t it
    for it in range(1, maxiter + 1):
        pap = 0.0
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                ap[i, j] = p[i, j] \
                    - (p[i + 1, j] - 2.0 * p[i, j] + p[i - 1, j]) * cx \
                    - (p[i, j + 1] - 2.0 * p[i, j] + p[i, j - 1]) * cy
                pap += p[i, j] * ap[i, j]
        alpha = rs / pap
        rs_new = 0.0
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                x[i, j] += alpha * p[i, j]
                r[i, j] -= alpha * ap[i, j]
                rs_new += r[i, j] * r[i, j]
        if sqrt(rs_new) <= stop:
            return x_arr, it, sqrt(rs_new) / bnorm
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                p[i, j] = r[i, j] + (rs_new / rs) * p[i, j]
        rs = rs_new
    return x_arr, maxiter, sqrt(rs) / bnorm
