"""NumPy fallback kernels with the same contracts as the compiled core.

The LCP sweep is red-black: on a tridiagonal matrix the even nodes only
read odd nodes and vice versa, so each half-sweep vectorizes while staying
a genuine Gauss-Seidel update (new values of the other color are used).
"""

import numpy as np
from scipy.linalg import solve_banded


def semilinear_newton(u, h, tol, max_iter):
    """Semismooth Newton for -Lap_h y + max(0, y) = u, zero boundary data.

    Returns (y, newton_steps, sup_residual).
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    inv_h2 = 1.0 / (h * h)
    off = -inv_h2
    base = 2.0 * inv_h2
    y = np.zeros(n)
    ab = np.empty((3, n))
    ab[0, :] = off
    ab[0, 0] = 0.0
    ab[2, :] = off
    ab[2, -1] = 0.0

    res = np.inf
    for it in range(max_iter + 1):
        ay = base * y
        ay[1:] += off * y[:-1]
        ay[:-1] += off * y[1:]
        f = ay + np.maximum(y, 0.0) - u
        res = float(np.max(np.abs(f)))
        if res <= tol or it == max_iter:
            return y, it, res
        ab[1, :] = base + (y >= 0.0)
        y = y + solve_banded((1, 1), ab, -f)

    return y, max_iter, res


def tridiag_lcp_psor(lower, diag, upper, q, psi, y0, tol, max_sweeps):
    """Projected Gauss-Seidel (relaxation 1.0, red-black order) for
    y >= psi, M y + q >= 0, complementarity; M tridiagonal with padded
    diagonals (lower[0] = 0, upper[n-1] = 0).

    Returns (y, sweeps, residual).
    """
    lower = np.asarray(lower, dtype=float)
    diag = np.asarray(diag, dtype=float)
    upper = np.asarray(upper, dtype=float)
    q = np.asarray(q, dtype=float)
    psi = np.asarray(psi, dtype=float)
    n = q.shape[0]

    yp = np.zeros(n + 2)
    yp[1:-1] = np.maximum(np.asarray(y0, dtype=float), psi)
    y = yp[1:-1]
    left = yp[:-2]    # views: y_{i-1} and y_{i+1} per node
    right = yp[2:]

    ev = slice(0, n, 2)
    od = slice(1, n, 2)

    def residual():
        my = lower * left + diag * y + upper * right + q
        return float(np.max(np.abs(np.minimum(y - psi, my))))

    res = residual()
    if res <= tol:
        return y.copy(), 0, res

    for sweep in range(1, max_sweeps + 1):
        cand = (-q[ev] - lower[ev] * left[ev] - upper[ev] * right[ev]) / diag[ev]
        y[ev] = np.maximum(cand, psi[ev])
        cand = (-q[od] - lower[od] * left[od] - upper[od] * right[od]) / diag[od]
        y[od] = np.maximum(cand, psi[od])
        res = residual()
        if res <= tol:
            return y.copy(), sweep, res

    return y.copy(), max_sweeps, res
