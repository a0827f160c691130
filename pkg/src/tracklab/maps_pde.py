"""Discretized control-to-state maps on the unit interval.

Two solvers:

* ``solve_semilinear`` -- the nonsmooth semilinear equation
  ``-y'' + max(0, y) = u`` with homogeneous Dirichlet data, discretized by
  the 3-point stencil and solved by semismooth Newton (active-set
  generalized derivative of ``max(0,.)``, ties at 0 treated as active so
  runs are deterministic).
* ``solve_parabolic_obstacle`` -- the obstacle-constrained heat flow
  ``dy/dt - Lap y >= B u``, ``y >= psi``, ``y(0) = 0``, advanced by
  implicit Euler; each step is a tridiagonal LCP solved by projected
  Gauss-Seidel. The observation is the final-time state.

The control embedding ``B`` is a nodal mask: controls live on a
contiguous index window and are extended by zero outside it.

Hot loops run in the kernel backend selected at import
(``tracklab._kernels``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError, NonConvergenceError
from .maps_analytic import ControlToStateMap

_CACHE_MAX = 4096


@dataclass(frozen=True)
class Mesh1D:
    """Uniform interior grid on (0,1): n nodes, width h = 1/(n+1)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"mesh needs at least 2 interior nodes, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)


def neg_laplacian_apply(mesh: Mesh1D, v) -> np.ndarray:
    """Apply the 3-point-stencil -Laplacian with zero Dirichlet data."""
    v = np.asarray(v, dtype=float)
    if v.shape != (mesh.n,):
        raise DimensionMismatchError(
            f"expected {mesh.n} nodal values, got shape {v.shape}"
        )
    inv_h2 = 1.0 / mesh.h**2
    out = 2.0 * inv_h2 * v
    out[1:] -= inv_h2 * v[:-1]
    out[:-1] -= inv_h2 * v[1:]
    return out


@dataclass(frozen=True)
class SemilinearConfig:
    mesh: Mesh1D
    newton_tol: float = 1e-10
    max_iter: int = 50

    def __post_init__(self):
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def solve_semilinear(u, cfg: SemilinearConfig) -> np.ndarray:
    """State of the semilinear equation for control ``u`` (nodal values).

    Raises ``NonConvergenceError`` if the Newton residual does not reach
    ``cfg.newton_tol`` (sup-norm) within ``cfg.max_iter`` steps.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (cfg.mesh.n,):
        raise DimensionMismatchError(
            f"control has shape {u.shape}, expected ({cfg.mesh.n},)"
        )
    y, iters, res = _kernels.semilinear_newton(
        u, cfg.mesh.h, cfg.newton_tol, cfg.max_iter
    )
    if res > cfg.newton_tol:
        raise NonConvergenceError(
            f"semismooth Newton stalled at residual {res:.3e} "
            f"(tol {cfg.newton_tol:.1e}) after {iters} steps",
            residual=res,
            iterations=iters,
        )
    return np.asarray(y)


def witness_controls(z, mesh: Mesh1D):
    """Control pair (u_plus, u_minus) whose states are exactly +2z and -2z.

    For interior-positive nodal data z, u_plus = 2(-Lap_h z + z) drives the
    state to 2z (active branch) and u_minus = 2 Lap_h z drives it to -2z
    (inactive branch), exhibiting the non-affinity of the solution map:
    the midpoint control (u_plus + u_minus)/2 equals z exactly, yet the
    states ±2z average to zero while the state of z does not.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (mesh.n,):
        raise DimensionMismatchError(
            f"z has shape {z.shape}, expected ({mesh.n},)"
        )
    if np.any(z <= 0):
        raise ValueError("witness construction requires z > 0 at every interior node")
    az = neg_laplacian_apply(mesh, z)
    u_plus = 2.0 * (az + z)
    u_minus = -2.0 * az
    return u_plus, u_minus


class SemilinearMap1D(ControlToStateMap):
    """Solution map of the 1D nonsmooth semilinear equation.

    Memoizes solves keyed by the control bytes so repeated evaluations at
    clustered minimizers are free during scans.
    """

    is_affine = False

    def __init__(self, cfg: SemilinearConfig):
        self.cfg = cfg
        self.input_dim = self.output_dim = cfg.mesh.n
        self._cache: dict[bytes, np.ndarray] = {}

    @property
    def mesh(self) -> Mesh1D:
        return self.cfg.mesh

    def evaluate(self, u):
        key = u.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        y = solve_semilinear(u, self.cfg)
        if len(self._cache) >= _CACHE_MAX:
            self._cache.clear()
        self._cache[key] = y
        return y


@dataclass(frozen=True)
class ParabolicGrid:
    """Space-time grid and obstacle data for the parabolic solver.

    ``control_window`` is the half-open interior-index range [lo, hi) of
    the control subdomain; ``psi`` holds the nodal obstacle values
    (required <= 0 so the zero initial state is feasible).
    """

    mesh: Mesh1D
    T: float
    n_t: int
    control_window: tuple[int, int]
    psi: np.ndarray = field(default=None)

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("final time T must be positive")
        if self.n_t < 1:
            raise ValueError("need at least one time step")
        lo, hi = self.control_window
        if not (0 <= lo < hi <= self.mesh.n):
            raise ValueError(
                f"control window [{lo}, {hi}) invalid for {self.mesh.n} nodes"
            )
        psi = self.psi
        if psi is None:
            psi = np.zeros(self.mesh.n)
        psi = np.asarray(psi, dtype=float)
        if psi.shape != (self.mesh.n,):
            raise DimensionMismatchError(
                f"obstacle has shape {psi.shape}, expected ({self.mesh.n},)"
            )
        if np.any(psi > 0):
            raise ValueError("obstacle values must be <= 0")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "control_window", (int(lo), int(hi)))

    @property
    def tau(self) -> float:
        return self.T / self.n_t

    @property
    def window_size(self) -> int:
        lo, hi = self.control_window
        return hi - lo

    def embed_control(self, u_step) -> np.ndarray:
        """Extend a window control to all interior nodes by zero."""
        lo, hi = self.control_window
        full = np.zeros(self.mesh.n)
        full[lo:hi] = u_step
        return full


def solve_obstacle_lcp(sub, diag, sup, q, psi, tol=1e-10, max_iter=100_000,
                       y0=None):
    """Solve y >= psi, M y + q >= 0, (y - psi)^T (M y + q) ~ 0.

    M is the tridiagonal matrix with subdiagonal ``sub`` (n-1), diagonal
    ``diag`` (n, positive) and superdiagonal ``sup`` (n-1). Projected
    Gauss-Seidel, stopping on the natural residual
    ``max_i |min(y_i - psi_i, (M y + q)_i)| <= tol``.
    """
    diag = np.asarray(diag, dtype=float)
    q = np.asarray(q, dtype=float)
    psi = np.asarray(psi, dtype=float)
    n = diag.shape[0]
    if q.shape != (n,) or psi.shape != (n,):
        raise DimensionMismatchError("q and psi must match the diagonal length")
    if np.any(diag <= 0):
        raise ValueError("LCP matrix must have a positive diagonal")
    lower = np.zeros(n)
    upper = np.zeros(n)
    lower[1:] = np.asarray(sub, dtype=float)
    upper[:-1] = np.asarray(sup, dtype=float)
    if y0 is None:
        y0 = np.maximum(psi, 0.0)
    y, sweeps, res = _kernels.tridiag_lcp_psor(
        lower, diag, upper, q, psi, np.asarray(y0, dtype=float), tol, max_iter
    )
    if res > tol:
        raise NonConvergenceError(
            f"projected Gauss-Seidel stalled at residual {res:.3e} "
            f"(tol {tol:.1e}) after {sweeps} sweeps",
            residual=res,
            iterations=sweeps,
        )
    return np.asarray(y)


def solve_parabolic_obstacle(u, grid: ParabolicGrid, psor_tol=1e-10,
                             psor_max_iter=200_000, return_trajectory=False):
    """Final-time state of the obstacle-constrained heat flow.

    ``u`` has shape (n_t, window_size): the control on the window for each
    implicit-Euler step. Each step solves the LCP with
    M = I/tau - Lap_h and q = -(y_prev/tau + B u_k), warm-started from the
    previous state. Raises ``NonConvergenceError`` (annotated with the
    step index) if a step's projected Gauss-Seidel stalls.
    """
    u = np.asarray(u, dtype=float)
    n = grid.mesh.n
    expected = (grid.n_t, grid.window_size)
    if u.shape != expected:
        raise DimensionMismatchError(
            f"control has shape {u.shape}, expected {expected}"
        )
    inv_h2 = 1.0 / grid.mesh.h**2
    tau = grid.tau
    lower = np.full(n, -inv_h2)
    lower[0] = 0.0
    upper = np.full(n, -inv_h2)
    upper[-1] = 0.0
    diag = np.full(n, 1.0 / tau + 2.0 * inv_h2)

    y = np.zeros(n)
    if np.any(y < grid.psi):  # psi <= 0 guarantees feasibility of y(0)=0
        raise ValueError("initial state infeasible")
    states = [] if return_trajectory else None
    for k in range(grid.n_t):
        q = -(y / tau + grid.embed_control(u[k]))
        ynew, sweeps, res = _kernels.tridiag_lcp_psor(
            lower, diag, upper, q, grid.psi, y, psor_tol, psor_max_iter
        )
        if res > psor_tol:
            raise NonConvergenceError(
                f"projected Gauss-Seidel stalled at step {k + 1}/{grid.n_t} "
                f"(residual {res:.3e}, tol {psor_tol:.1e})",
                residual=res,
                iterations=sweeps,
            )
        y = np.asarray(ynew)
        if return_trajectory:
            states.append(y.copy())
    if return_trajectory:
        return y, np.array(states)
    return y


class ParabolicObstacleMap(ControlToStateMap):
    """Control-to-final-state map of the parabolic obstacle flow.

    Controls are flattened (n_t * window_size,) vectors; the state is the
    final-time nodal vector. Solves are memoized by control bytes.
    """

    is_affine = False

    def __init__(self, grid: ParabolicGrid, psor_tol=1e-10,
                 psor_max_iter=200_000):
        self.grid = grid
        self.psor_tol = psor_tol
        self.psor_max_iter = psor_max_iter
        self.input_dim = grid.n_t * grid.window_size
        self.output_dim = grid.mesh.n
        self._cache: dict[bytes, np.ndarray] = {}

    def evaluate(self, u):
        key = u.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        y = solve_parabolic_obstacle(
            u.reshape(self.grid.n_t, self.grid.window_size),
            self.grid,
            psor_tol=self.psor_tol,
            psor_max_iter=self.psor_max_iter,
        )
        if len(self._cache) >= _CACHE_MAX:
            self._cache.clear()
        self._cache[key] = y
        return y
