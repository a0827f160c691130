"""Experiments on tracking problems.

The operations here turn the structural facts about nonuniqueness and
instability into reproducible runs:

* affinity / linearity defects quantify how far a map is from the affine
  class (for which minimizers are unique everywhere);
* ``find_nonunique_target`` bisects a target path across a basin exchange
  until it certifies a target with two distinct global minimizers of
  equal objective value (a point of the exceptional set);
* ``verify_segment_uniqueness`` checks that targets on the open segment
  from the certified target toward either minimizer have that minimizer
  as their unique global solution;
* ``discontinuity_witness`` drives the segment parameter to 0 along two
  branches, producing target sequences that converge to the certified
  target while the attached unique minimizers stay a fixed distance
  apart -- so no continuous selection of minimizers exists;
* ``tikhonov_sweep`` and ``chebyshev_scan`` map out multiplicity as the
  control weight or the target varies;
* ``linf_demo`` shows a minimizer continuum for the max-norm objective,
  where the geometric assumptions behind the uniqueness machinery fail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoBasinJumpError, TrackLabError
from .problem import TargetTuple, TrackingProblem
from .solver import (SolverOptions, grid_oracle, local_minimize, multistart)
from .spaces import product_norm


def affinity_defect(map_, u1, u2, lambdas, norm) -> float:
    """max over lambda of ||S(l u1 + (1-l) u2) - l S(u1) - (1-l) S(u2)||.

    Zero (to rounding) exactly for affine maps; strictly positive
    somewhere for every non-affine map.
    """
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if np.any((lambdas < 0) | (lambdas > 1)):
        raise ValueError("lambda values must lie in [0, 1]")
    u1 = np.atleast_1d(np.asarray(u1, dtype=float))
    u2 = np.atleast_1d(np.asarray(u2, dtype=float))
    y1 = map_(u1)
    y2 = map_(u2)
    worst = 0.0
    for lam in lambdas:
        mixed = map_(lam * u1 + (1.0 - lam) * u2)
        worst = max(worst, norm(mixed - lam * y1 - (1.0 - lam) * y2))
    return worst


def linearity_defect(map_, u, alphas, norm) -> float:
    """max over alpha of ||L(alpha u) - alpha L(u)|| with L(v) = S(v) - S(0)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    s0 = map_(np.zeros(map_.input_dim))
    lu = map_(u) - s0
    worst = 0.0
    for alpha in alphas:
        worst = max(worst, norm(map_(alpha * u) - s0 - alpha * lu))
    return worst


def segment_target(t: float, sol, target) -> TargetTuple:
    """Convex combination t*(y_sol, u_sol) + (1-t)*(y_d, u_d)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"segment parameter must lie in [0, 1], got {t}")
    y_s, u_s = (sol.y_d, sol.u_d) if isinstance(sol, TargetTuple) else sol
    y_d, u_d = (target.y_d, target.u_d) if isinstance(target, TargetTuple) else target
    y_s = np.atleast_1d(np.asarray(y_s, dtype=float))
    u_s = np.atleast_1d(np.asarray(u_s, dtype=float))
    y_d = np.atleast_1d(np.asarray(y_d, dtype=float))
    u_d = np.atleast_1d(np.asarray(u_d, dtype=float))
    return TargetTuple(t * y_s + (1.0 - t) * y_d, t * u_s + (1.0 - t) * u_d)


@dataclass(frozen=True)
class TargetPath:
    """Linear path between two target tuples.

    Optional hints are known candidate minimizers at the endpoints; they
    are polished alongside the random multistart points (deterministic, so
    reproducibility is unaffected). Needed when the control space is too
    high-dimensional for random starts to find the relevant basin.
    """

    start: TargetTuple
    end: TargetTuple
    start_hint: np.ndarray | None = None
    end_hint: np.ndarray | None = None

    def at(self, s: float) -> TargetTuple:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"path parameter must lie in [0, 1], got {s}")
        return TargetTuple(
            (1.0 - s) * self.start.y_d + s * self.end.y_d,
            (1.0 - s) * self.start.u_d + s * self.end.u_d,
        )


@dataclass(frozen=True)
class SolutionPair:
    """Two distinct minimizers of one problem with equal objective value."""

    y_first: np.ndarray
    u_first: np.ndarray
    y_second: np.ndarray
    u_second: np.ndarray
    J_first: float
    J_second: float
    separation: float  # control-norm distance between the minimizers


def product_distance(prob: TrackingProblem, pair_a, pair_b) -> float:
    """Distance of two (y, u) tuples in the product norm of prob."""
    dy = prob.state_norm(np.asarray(pair_a[0]) - np.asarray(pair_b[0]))
    du = prob.control_norm(np.asarray(pair_a[1]) - np.asarray(pair_b[1]))
    return product_norm(dy, du, prob.p)


def find_nonunique_target(prob: TrackingProblem, path: TargetPath, *,
                          n_starts: int = 64, seed: int = 0, box,
                          opts: SolverOptions | None = None,
                          tol_u: float = 1e-4, tol_J: float = 1e-7,
                          bisect_tol: float = 1e-10,
                          max_bisect: int = 200):
    """Certify a target whose problem has two distinct global minimizers.

    The path endpoints must each have a unique global minimizer, and those
    minimizers must be distinct (a basin exchange happens in between).
    Bisection on the path parameter polishes both branch representatives
    at each midpoint and narrows until their objective values agree to
    tol_J; returns (target, SolutionPair).
    """
    reps = []
    for s, hint in ((0.0, path.start_hint), (1.0, path.end_hint)):
        extra = () if hint is None else (hint,)
        report = multistart(prob.with_target(path.at(s)), n_starts, seed, box,
                            opts, tol_u=tol_u, tol_J=tol_J, extra_starts=extra)
        if len(report.global_clusters) != 1:
            raise NoBasinJumpError(
                f"path endpoint s={s:g} has {len(report.global_clusters)} "
                "global clusters; need exactly one"
            )
        reps.append(report.global_clusters[0].representative)
    rep_lo, rep_hi = reps
    if prob.control_norm(rep_lo - rep_hi) <= tol_u:
        raise NoBasinJumpError(
            "path endpoints share their global minimizer; "
            "path does not cross the exceptional set"
        )

    lo, hi = 0.0, 1.0
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        pm = prob.with_target(path.at(mid))
        res_a = local_minimize(pm, rep_lo, opts)
        res_b = local_minimize(pm, rep_hi, opts)
        separation = prob.control_norm(res_a.u_star - res_b.u_star)
        if separation <= tol_u:
            raise NoBasinJumpError(
                f"branches merged at s={mid:.12g}: the minimizer pair "
                "collapses before the objective values cross"
            )
        if abs(res_a.J_star - res_b.J_star) <= tol_J:
            pair = SolutionPair(
                y_first=prob.map(res_a.u_star), u_first=res_a.u_star,
                y_second=prob.map(res_b.u_star), u_second=res_b.u_star,
                J_first=res_a.J_star, J_second=res_b.J_star,
                separation=separation,
            )
            return path.at(mid), pair
        if res_a.J_star < res_b.J_star:
            lo, rep_lo = mid, res_a.u_star
        else:
            hi, rep_hi = mid, res_b.u_star
        if hi - lo < bisect_tol:
            raise TrackLabError(
                f"bisection interval collapsed below {bisect_tol:g} with "
                f"|dJ| = {abs(res_a.J_star - res_b.J_star):.3e} > {tol_J:g}"
            )
    raise TrackLabError(f"no certification after {max_bisect} bisection steps")


@dataclass
class SegmentRecord:
    t: float
    n_global_clusters: int
    representative: np.ndarray
    distance: float          # control-norm distance to the expected minimizer
    ok: bool
    oracle_clusters: int | None = None
    oracle_ok: bool | None = None


@dataclass
class SegmentReport:
    branch: str
    expected_u: np.ndarray
    records: list
    verdict: bool

    @property
    def t_values(self):
        return [r.t for r in self.records]


def verify_segment_uniqueness(prob: TrackingProblem, pair: SolutionPair,
                              t_list, *, n_starts: int = 64, seed: int = 0,
                              box, opts: SolverOptions | None = None,
                              tol: float = 1e-4, tol_u: float = 1e-4,
                              tol_J: float = 1e-7, oracle_points: int = 0):
    """Check that segment targets have the endpoint solution as their
    unique global minimizer.

    For each t in t_list (open interval (0,1)) and each pair member,
    multistart solves the problem at t*(y_sol,u_sol) + (1-t)*(y_d,u_d);
    the record passes when exactly one global cluster exists and matches
    the member within tol. oracle_points > 0 adds a brute-force grid
    cross-check (input dimension <= 2 only). Returns one SegmentReport per
    member; verdict is True iff every record passes.
    """
    t_list = [float(t) for t in t_list]
    if any(not 0.0 < t < 1.0 for t in t_list):
        raise ValueError("segment parameters must lie strictly inside (0, 1)")
    use_oracle = oracle_points > 0 and prob.map.input_dim <= 2
    reports = []
    for branch, y_b, u_b in (("first", pair.y_first, pair.u_first),
                             ("second", pair.y_second, pair.u_second)):
        records = []
        for t in t_list:
            target = segment_target(t, (y_b, u_b), prob.target)
            pm = prob.with_target(target)
            ms = multistart(pm, n_starts, seed, box, opts,
                            tol_u=tol_u, tol_J=tol_J)
            n_glob = len(ms.global_clusters)
            rep = ms.global_clusters[0].representative
            dist = pm.control_norm(rep - u_b)
            ok = n_glob == 1 and dist <= tol
            rec = SegmentRecord(t, n_glob, rep, dist, ok)
            if use_oracle:
                oracle = grid_oracle(pm, box, oracle_points)
                rec.oracle_clusters = len(oracle.cluster_representatives)
                cell = np.max(oracle.spacing)
                rec.oracle_ok = (
                    rec.oracle_clusters == 1
                    and np.max(np.abs(oracle.cluster_representatives[0] - u_b))
                    <= cell + tol
                )
                ok = ok and rec.oracle_ok
                rec.ok = ok
            records.append(rec)
        reports.append(SegmentReport(
            branch=branch,
            expected_u=u_b,
            records=records,
            verdict=all(r.ok for r in records),
        ))
    return reports[0], reports[1]


@dataclass
class WitnessReport:
    """Two target sequences converging to one target whose unique
    minimizers stay apart: no continuous selection exists along them."""

    t_values: list
    target_distances: list       # product-norm distance of targets to the limit
    branch_minimizers: tuple     # (list of u along first, list along second)
    gaps: list                   # product-norm gap between branch solutions
    all_unique: bool
    pair_gap: float
    distances_decreasing: bool
    certified: bool


def discontinuity_witness(prob: TrackingProblem, pair: SolutionPair,
                          t_sequence, *, n_starts: int = 64, seed: int = 0,
                          box, opts: SolverOptions | None = None,
                          tol_u: float = 1e-4, tol_J: float = 1e-7):
    """Follow the two segment-target sequences for t in t_sequence.

    Per element and branch, multistart must find a unique global
    minimizer. The report records target distances to the limit target
    (which scale linearly in t) and the product-norm gap between the two
    branch minimizers (which stays at the pair separation), certifying
    that minimizers cannot be selected continuously at the limit.
    """
    t_values = [float(t) for t in t_sequence]
    if any(not 0.0 < t < 1.0 for t in t_values):
        raise ValueError("witness parameters must lie strictly inside (0, 1)")
    pair_gap = product_distance(prob, (pair.y_first, pair.u_first),
                                (pair.y_second, pair.u_second))
    branch_minimizers = ([], [])
    target_distances = []
    gaps = []
    all_unique = True
    for t in t_values:
        per_branch = []
        for idx, (y_b, u_b) in enumerate(((pair.y_first, pair.u_first),
                                          (pair.y_second, pair.u_second))):
            target = segment_target(t, (y_b, u_b), prob.target)
            pm = prob.with_target(target)
            ms = multistart(pm, n_starts, seed, box, opts,
                            tol_u=tol_u, tol_J=tol_J)
            if len(ms.global_clusters) != 1:
                all_unique = False
            u_star = ms.global_clusters[0].representative
            branch_minimizers[idx].append(u_star)
            per_branch.append(u_star)
            if idx == 0:
                target_distances.append(product_distance(
                    prob, (target.y_d, target.u_d), (prob.y_d, prob.u_d)))
        gaps.append(product_distance(
            prob,
            (prob.map(per_branch[0]), per_branch[0]),
            (prob.map(per_branch[1]), per_branch[1]),
        ))
    decreasing = all(b < a for a, b in zip(target_distances, target_distances[1:]))
    certified = (all_unique
                 and min(gaps) >= pair_gap - 10.0 * tol_u
                 and decreasing)
    return WitnessReport(
        t_values=t_values,
        target_distances=target_distances,
        branch_minimizers=branch_minimizers,
        gaps=gaps,
        all_unique=all_unique,
        pair_gap=pair_gap,
        distances_decreasing=decreasing,
        certified=certified,
    )


@dataclass
class SweepRow:
    nu: float
    n_global_clusters: int
    representatives: list
    J_best: float


@dataclass
class SweepReport:
    rows: list


def tikhonov_sweep(prob_base: TrackingProblem, nu_list, *, n_starts: int = 64,
                   seed: int = 0, box, opts: SolverOptions | None = None,
                   tol_u: float = 1e-4, tol_J: float = 1e-7) -> SweepReport:
    """Global cluster structure of the control-weighted problem per nu."""
    rows = []
    for nu in nu_list:
        nu = float(nu)
        if nu <= 0:
            raise ValueError(f"Tikhonov weight must be positive, got {nu}")
        report = multistart(prob_base.rescale_nu(nu), n_starts, seed, box,
                            opts, tol_u=tol_u, tol_J=tol_J)
        rows.append(SweepRow(
            nu=nu,
            n_global_clusters=len(report.global_clusters),
            representatives=report.global_representatives,
            J_best=report.J_best,
        ))
    return SweepReport(rows=rows)


@dataclass
class ScanReport:
    y_d_values: np.ndarray
    u_d_values: np.ndarray
    multiplicity: np.ndarray     # shape (len(y_d_values), len(u_d_values))
    exceptional: list            # [(y_d, u_d)] with multiplicity >= 2


def chebyshev_scan(prob: TrackingProblem, y_d_values, u_d_values, *,
                   n_starts: int = 32, seed: int = 0, box,
                   opts: SolverOptions | None = None, tol_u: float = 1e-4,
                   tol_J: float = 1e-7) -> ScanReport:
    """Multiplicity of global minimizers over a grid of scalar targets.

    Multiplicity 1 everywhere is Chebyshev behavior of the graph; the
    exceptional set collects targets with 2 or more global clusters.
    Restricted to scalar state and control (target space of dimension 2).
    """
    if prob.map.input_dim != 1 or prob.map.output_dim != 1:
        raise ValueError("target scan needs scalar state and control")
    y_d_values = np.atleast_1d(np.asarray(y_d_values, dtype=float))
    u_d_values = np.atleast_1d(np.asarray(u_d_values, dtype=float))
    multiplicity = np.zeros((y_d_values.size, u_d_values.size), dtype=int)
    exceptional = []
    for i, yd in enumerate(y_d_values):
        for j, ud in enumerate(u_d_values):
            pm = prob.with_target(TargetTuple([yd], [ud]))
            report = multistart(pm, n_starts, seed, box, opts,
                                tol_u=tol_u, tol_J=tol_J)
            m = len(report.global_clusters)
            multiplicity[i, j] = m
            if m >= 2:
                exceptional.append((float(yd), float(ud)))
    return ScanReport(
        y_d_values=y_d_values,
        u_d_values=u_d_values,
        multiplicity=multiplicity,
        exceptional=exceptional,
    )


@dataclass
class LinfDemoReport:
    J_best: float
    u_best: np.ndarray
    near_points: np.ndarray
    n_near: int
    resolution: int
    tol: float


def linf_demo(resolution: int = 301, lo: float = -1.5, hi: float = 1.5,
              tol: float = 1e-6) -> LinfDemoReport:
    """Brute-force scan of min ||(1,0) - y||_inf^2 + ||u||_inf^2, y = u.

    The max-norm is neither uniformly convex nor smooth, and the minimizer
    set is a whole segment {(0.5, s) : |s| <= 0.5} -- returned as the set
    of grid points within tol of the best value.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 per axis")
    axis = np.linspace(lo, hi, resolution)
    u1, u2 = np.meshgrid(axis, axis, indexing="ij")
    track = np.maximum(np.abs(1.0 - u1), np.abs(u2)) ** 2
    effort = np.maximum(np.abs(u1), np.abs(u2)) ** 2
    values = track + effort
    i_best = np.unravel_index(np.argmin(values), values.shape)
    J_best = float(values[i_best])
    mask = values <= J_best + tol
    near = np.stack([u1[mask], u2[mask]], axis=-1)
    return LinfDemoReport(
        J_best=J_best,
        u_best=np.array([u1[i_best], u2[i_best]]),
        near_points=near,
        n_near=int(near.shape[0]),
        resolution=resolution,
        tol=tol,
    )
