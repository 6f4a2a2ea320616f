# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels.

Same contracts as canodual.kernels.reference; see that module for the
packed array layout.  These loops avoid temporary allocations so the
multistart solvers and line searches stay cheap on small problems.
"""

import numpy as np

from libc.math cimport INFINITY


def quartic_measure(const double[:, :, ::1] A, const double[:, ::1] b, const double[::1] c,
                    const double[::1] x):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = A.shape[1]
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double quad, lin, row
    for i in range(m):
        quad = 0.0
        lin = 0.0
        for j in range(n):
            row = 0.0
            for k in range(n):
                row += A[i, j, k] * x[k]
            quad += row * x[j]
            lin += b[i, j] * x[j]
        out[i] = 0.5 * quad + lin + c[i]
    return out_arr


def quartic_value(const double[::1] alpha, const double[:, :, ::1] A, const double[:, ::1] b,
                  const double[::1] c, const double[:, ::1] Q, const double[::1] f,
                  const double[::1] x):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = Q.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double total = 0.0
    cdef double quad, lin, row, xi
    for i in range(m):
        quad = 0.0
        lin = 0.0
        for j in range(n):
            row = 0.0
            for k in range(n):
                row += A[i, j, k] * x[k]
            quad += row * x[j]
            lin += b[i, j] * x[j]
        xi = 0.5 * quad + lin + c[i]
        total += 0.5 * alpha[i] * xi * xi
    for j in range(n):
        row = 0.0
        for k in range(n):
            row += Q[j, k] * x[k]
        total += 0.5 * row * x[j] - f[j] * x[j]
    return total


def quartic_value_grad(const double[::1] alpha, const double[:, :, ::1] A,
                       const double[:, ::1] b, const double[::1] c, const double[:, ::1] Q,
                       const double[::1] f, const double[::1] x):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = Q.shape[0]
    grad_arr = np.zeros(n)
    cdef double[::1] g = grad_arr
    rows_arr = np.empty(n)
    cdef double[::1] rows = rows_arr
    cdef Py_ssize_t i, j, k
    cdef double total = 0.0
    cdef double quad, lin, row, xi, w
    for i in range(m):
        quad = 0.0
        lin = 0.0
        for j in range(n):
            row = 0.0
            for k in range(n):
                row += A[i, j, k] * x[k]
            rows[j] = row
            quad += row * x[j]
            lin += b[i, j] * x[j]
        xi = 0.5 * quad + lin + c[i]
        total += 0.5 * alpha[i] * xi * xi
        w = alpha[i] * xi
        for j in range(n):
            g[j] += w * (rows[j] + b[i, j])
    for j in range(n):
        row = 0.0
        for k in range(n):
            row += Q[j, k] * x[k]
        total += 0.5 * row * x[j] - f[j] * x[j]
        g[j] += row - f[j]
    return total, grad_arr


def lj_value(const double[:, ::1] pos):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j
    cdef double tau, dx, dy, dz, it3
    cdef double total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            dz = pos[i, 2] - pos[j, 2]
            tau = dx * dx + dy * dy + dz * dz
            if tau == 0.0:
                return INFINITY
            it3 = 1.0 / (tau * tau * tau)
            total += it3 * it3 - it3
    return 4.0 * total


def lj_value_grad(const double[:, ::1] pos):
    cdef Py_ssize_t n = pos.shape[0]
    grad_arr = np.zeros((n, 3))
    cdef double[:, ::1] g = grad_arr
    cdef Py_ssize_t i, j
    cdef double tau, dx, dy, dz, it, it3, it4, coef
    cdef double total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            dz = pos[i, 2] - pos[j, 2]
            tau = dx * dx + dy * dy + dz * dz
            if tau == 0.0:
                grad_arr[:] = np.nan
                return INFINITY, grad_arr
            it = 1.0 / tau
            it3 = it * it * it
            it4 = it3 * it
            total += it3 * it3 - it3
            coef = 24.0 * it4 - 48.0 * it3 * it4
            g[i, 0] += coef * dx
            g[i, 1] += coef * dy
            g[i, 2] += coef * dz
            g[j, 0] -= coef * dx
            g[j, 1] -= coef * dy
            g[j, 2] -= coef * dz
    return 4.0 * total, grad_arr
