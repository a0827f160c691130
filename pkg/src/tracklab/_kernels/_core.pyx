# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Two hot loops live here: the semismooth Newton iteration for the 1D
nonsmooth semilinear equation (called hundreds of times per finite
difference gradient) and the projected Gauss--Seidel sweeps for
tridiagonal linear complementarity problems (thousands of sweeps per
parabolic solve).

Sweep order of the LCP kernel is red-black (even indices, then odd): for a
tridiagonal matrix each color only reads the other color, so the
vectorized NumPy fallback in ``pure.py`` performs the same arithmetic.
"""

import numpy as np


def semilinear_newton(double[::1] u, double h, double tol, int max_iter):
    """Solve -Lap_h y + max(0, y) = u on the interior of (0,1), y=0 at ends.

    3-point stencil Laplacian, semismooth Newton with the active-set
    generalized derivative of max(0,.) (1 where y_i >= 0, else 0), Thomas
    solves for the Newton systems.

    Returns (y, newton_steps, sup_residual); the caller decides whether a
    residual above tol is an error.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double off = -inv_h2
    cdef double base = 2.0 * inv_h2
    y_arr = np.zeros(n)
    cdef double[::1] y = y_arr
    cdef double[::1] rhs = np.empty(n)
    cdef double[::1] cp = np.empty(n)
    cdef double[::1] dp = np.empty(n)
    cdef double[::1] m = np.empty(n)
    cdef Py_ssize_t i
    cdef int it
    cdef double res, ay, fy, denom, delta

    for it in range(max_iter + 1):
        res = 0.0
        for i in range(n):
            ay = base * y[i]
            if i > 0:
                ay += off * y[i - 1]
            if i < n - 1:
                ay += off * y[i + 1]
            fy = ay - u[i]
            if y[i] > 0.0:
                fy += y[i]
            rhs[i] = -fy
            if fy < 0.0:
                fy = -fy
            if fy > res:
                res = fy
        if res <= tol or it == max_iter:
            return y_arr, it, res
        for i in range(n):
            m[i] = base + (1.0 if y[i] >= 0.0 else 0.0)
        cp[0] = off / m[0]
        dp[0] = rhs[0] / m[0]
        for i in range(1, n):
            denom = m[i] - off * cp[i - 1]
            cp[i] = off / denom
            dp[i] = (rhs[i] - off * dp[i - 1]) / denom
        delta = dp[n - 1]
        y[n - 1] += delta
        for i in range(n - 2, -1, -1):
            delta = dp[i] - cp[i] * delta
            y[i] += delta

    return y_arr, max_iter, res


def tridiag_lcp_psor(double[::1] lower, double[::1] diag, double[::1] upper,
                     double[::1] q, double[::1] psi, double[::1] y0,
                     double tol, long max_sweeps):
    """Projected Gauss-Seidel for: y >= psi, M y + q >= 0, complementarity.

    M is tridiagonal with full-length padded diagonals (lower[0] = 0,
    upper[n-1] = 0). Relaxation 1.0; red-black sweep order. Stops when the
    natural residual max_i |min(y_i - psi_i, (M y + q)_i)| falls below tol.

    Returns (y, sweeps, residual).
    """
    cdef Py_ssize_t n = q.shape[0]
    y_arr = np.empty(n)
    cdef double[::1] y = y_arr
    cdef Py_ssize_t i
    cdef long sweep
    cdef double cand, my, r, res

    for i in range(n):
        y[i] = y0[i] if y0[i] > psi[i] else psi[i]

    res = _natural_residual(lower, diag, upper, q, psi, y)
    if res <= tol:
        return y_arr, 0, res

    for sweep in range(1, max_sweeps + 1):
        for i in range(0, n, 2):
            cand = -q[i]
            if i > 0:
                cand = cand - lower[i] * y[i - 1]
            if i < n - 1:
                cand = cand - upper[i] * y[i + 1]
            cand = cand / diag[i]
            y[i] = cand if cand > psi[i] else psi[i]
        for i in range(1, n, 2):
            cand = -q[i]
            cand = cand - lower[i] * y[i - 1]
            if i < n - 1:
                cand = cand - upper[i] * y[i + 1]
            cand = cand / diag[i]
            y[i] = cand if cand > psi[i] else psi[i]
        res = _natural_residual(lower, diag, upper, q, psi, y)
        if res <= tol:
            return y_arr, sweep, res

    return y_arr, max_sweeps, res


cdef double _natural_residual(double[::1] lower, double[::1] diag,
                              double[::1] upper, double[::1] q,
                              double[::1] psi, double[::1] y):
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t i
    cdef double my, r, res = 0.0
    for i in range(n):
        my = diag[i] * y[i]
        if i > 0:
            my = lower[i] * y[i - 1] + my
        if i < n - 1:
            my = my + upper[i] * y[i + 1]
        my = my + q[i]
        r = y[i] - psi[i]
        if my < r:
            r = my
        if r < 0.0:
            r = -r
        if r > res:
            res = r
    return res
