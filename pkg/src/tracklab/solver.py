"""Local minimization, deterministic multistart, clustering, grid oracle.

The local solver is plain gradient descent with finite-difference
gradients and Armijo backtracking; it is deliberately slow but robust
under the kinks of |.| and max(0,.). Start points come from a
counter-based generator keyed by (seed, start index), so reports are
bit-for-bit reproducible regardless of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, TrackLabError
from .problem import TrackingProblem, gradient_fd


@dataclass(frozen=True)
class SolverOptions:
    grad_tol: float = 1e-8
    step_tol: float = 1e-12
    max_iter: int = 5000
    fd_step: float = 1e-6
    armijo_c: float = 1e-4
    init_step: float = 1.0
    max_step: float = 1e6


@dataclass
class LocalSolveResult:
    u_star: np.ndarray
    J_star: float
    iterations: int
    converged: bool
    grad_norm: float
    status: str  # "grad_tol" | "step_collapse" | "max_iter"
    J_history: list = field(default_factory=list)  # J at each accepted step


@dataclass
class Cluster:
    representative: np.ndarray
    J: float
    size: int


@dataclass
class MultistartReport:
    clusters: list          # all clusters, sorted by J
    global_clusters: list   # clusters with J <= J_best + tol_J
    seed: int
    n_starts: int
    n_converged: int
    tol_u: float
    tol_J: float

    @property
    def global_representatives(self) -> list:
        return [c.representative for c in self.global_clusters]

    @property
    def J_best(self) -> float:
        return self.clusters[0].J


def local_minimize(prob: TrackingProblem, u0, opts: SolverOptions | None = None
                   ) -> LocalSolveResult:
    """Armijo gradient descent from u0 (c = armijo_c, halving backtracks).

    Accepted steps never increase J. The trial step doubles after each
    accepted step (capped at max_step), which adapts the method to the
    curvature scale of grid-norm objectives. Convergence means either
    grad_norm <= grad_tol or the backtracked step collapsing below
    step_tol (the FD-noise floor near kinks).
    """
    opts = opts or SolverOptions()
    u = np.atleast_1d(np.asarray(u0, dtype=float)).copy()
    if not np.all(np.isfinite(u)):
        raise ValueError("start point is not finite")
    J = prob.objective(u)
    if not np.isfinite(J):
        raise ValueError(f"objective not finite at start point (J={J})")
    history = [J]
    step = opts.init_step
    grad_norm = np.inf
    for it in range(1, opts.max_iter + 1):
        g = gradient_fd(prob, u, opts.fd_step)
        grad_norm = float(np.linalg.norm(g))
        if grad_norm <= opts.grad_tol:
            return LocalSolveResult(u, J, it - 1, True, grad_norm, "grad_tol",
                                    history)
        step = min(step * 2.0, opts.max_step)
        gg = grad_norm**2
        while True:
            trial = u - step * g
            J_trial = prob.objective(trial)
            # strict decrease on top of Armijo: once J sits on a float64
            # plateau near a minimizer, ulp-level jitter must not be
            # accepted forever -- the step collapses instead, which is the
            # intended terminator there
            if (np.isfinite(J_trial) and J_trial < J
                    and J_trial <= J - opts.armijo_c * step * gg):
                u, J = trial, J_trial
                history.append(J)
                break
            step *= 0.5
            if step < opts.step_tol:
                return LocalSolveResult(u, J, it, True, grad_norm,
                                        "step_collapse", history)
    return LocalSolveResult(u, J, opts.max_iter, False, grad_norm, "max_iter",
                            history)


def sample_starts(seed: int, n_starts: int, box: np.ndarray) -> np.ndarray:
    """Uniform starts in the box, stream i keyed by (seed, i) via Philox."""
    dim = box.shape[0]
    starts = np.empty((n_starts, dim))
    for i in range(n_starts):
        gen = np.random.Generator(np.random.Philox(key=np.array([seed, i], dtype=np.uint64)))
        starts[i] = box[:, 0] + gen.random(dim) * (box[:, 1] - box[:, 0])
    return starts


def _as_box(box, dim: int) -> np.ndarray:
    b = np.asarray(box, dtype=float)
    if b.ndim == 1:
        b = b[None, :]
    if b.shape == (1, 2) and dim > 1:
        b = np.repeat(b, dim, axis=0)
    if b.shape != (dim, 2):
        raise DimensionMismatchError(
            f"box must have shape ({dim}, 2) or (1, 2), got {b.shape}"
        )
    if not np.all(np.isfinite(b)) or np.any(b[:, 0] >= b[:, 1]):
        raise ValueError("box must be bounded with lo < hi per coordinate")
    return b


def cluster_minimizers(results, control_norm, tol_u: float = 1e-4,
                       tol_J: float = 1e-7):
    """Greedy clustering of local solves by control-norm distance.

    Results are absorbed into the first cluster whose representative is
    within tol_u; the representative is the member with the lowest J.
    Returns (clusters sorted by J, global clusters within tol_J of the
    best).
    """
    if not results:
        raise ValueError("no results to cluster")
    clusters: list[Cluster] = []
    for res in results:
        for c in clusters:
            if control_norm(res.u_star - c.representative) <= tol_u:
                c.size += 1
                if res.J_star < c.J:
                    c.representative = res.u_star
                    c.J = res.J_star
                break
        else:
            clusters.append(Cluster(res.u_star, res.J_star, 1))
    clusters.sort(key=lambda c: c.J)
    J_best = clusters[0].J
    global_clusters = [c for c in clusters if c.J <= J_best + tol_J]
    return clusters, global_clusters


def multistart(prob: TrackingProblem, n_starts: int, seed: int, box,
               opts: SolverOptions | None = None, tol_u: float = 1e-4,
               tol_J: float = 1e-7, extra_starts=()) -> MultistartReport:
    """Deterministic multistart globalization.

    Runs local_minimize from n_starts sampled points (plus any
    deterministic extra_starts, e.g. known candidate solutions when random
    starts cannot cover a high-dimensional control space), clusters the
    converged results in start order and extracts the global set.
    """
    if n_starts < 1:
        raise ValueError("need at least one start")
    box = _as_box(box, prob.map.input_dim)
    starts = sample_starts(seed, n_starts, box)
    all_starts = list(starts) + [
        np.atleast_1d(np.asarray(e, dtype=float)) for e in extra_starts
    ]
    results = []
    for u0 in all_starts:
        res = local_minimize(prob, u0, opts)
        if res.converged:
            results.append(res)
    if not results:
        raise TrackLabError(
            f"all {len(all_starts)} local solves failed to converge"
        )
    clusters, global_clusters = cluster_minimizers(
        results, prob.control_norm, tol_u, tol_J
    )
    return MultistartReport(
        clusters=clusters,
        global_clusters=global_clusters,
        seed=seed,
        n_starts=n_starts,
        n_converged=len(results),
        tol_u=tol_u,
        tol_J=tol_J,
    )


@dataclass
class OracleReport:
    u_best: np.ndarray
    J_best: float
    near_points: np.ndarray      # all grid points with J <= J_best + near_tol
    cluster_representatives: list
    spacing: np.ndarray
    points_per_dim: int
    near_tol: float


def grid_oracle(prob: TrackingProblem, box, points_per_dim: int,
                near_tol: float = 1e-5, link_tol: float | None = None
                ) -> OracleReport:
    """Brute-force tensor-grid evaluation (independent of the local solver).

    Near-optimal points are grouped by transitive grid adjacency (two
    points link when their Chebyshev distance is below link_tol, default
    1.5 cells), so a blob of cells around one minimizer counts as one
    cluster. Dimension is capped at 3 to bound cost.
    """
    dim = prob.map.input_dim
    if dim > 3:
        raise DimensionMismatchError(
            f"grid oracle restricted to dimension <= 3, got {dim}"
        )
    if points_per_dim < 2:
        raise ValueError("need at least 2 points per dimension")
    box = _as_box(box, dim)
    axes = [np.linspace(lo, hi, points_per_dim) for lo, hi in box]
    spacing = np.array([ax[1] - ax[0] for ax in axes])
    if link_tol is None:
        link_tol = 1.5 * float(np.max(spacing))

    grids = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=-1)
    values = np.array([prob.objective(pt) for pt in points])

    i_best = int(np.argmin(values))
    J_best = float(values[i_best])
    near_mask = values <= J_best + near_tol
    near_points = points[near_mask]
    near_values = values[near_mask]

    order = np.argsort(near_values, kind="stable")
    reps: list[np.ndarray] = []
    labels = -np.ones(len(near_points), dtype=int)
    # union by transitive adjacency, visiting points best-first so each
    # cluster's representative is its lowest-J point
    for idx in order:
        if labels[idx] >= 0:
            continue
        label = len(reps)
        stack = [idx]
        labels[idx] = label
        reps.append(near_points[idx])
        while stack:
            j = stack.pop()
            cheb = np.max(np.abs(near_points - near_points[j]), axis=1)
            for k in np.nonzero((cheb <= link_tol) & (labels < 0))[0]:
                labels[k] = label
                stack.append(k)
    return OracleReport(
        u_best=points[i_best],
        J_best=J_best,
        near_points=near_points,
        cluster_representatives=reps,
        spacing=spacing,
        points_per_dim=points_per_dim,
        near_tol=near_tol,
    )
