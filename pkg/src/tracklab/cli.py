"""Scenario-driven command line front end.

    tracklab run <config.json> [--seed N] [--out DIR]
    tracklab validate <config.json>
    tracklab list-maps
    tracklab list-experiments

One scenario per invocation. ``run`` writes report.json (always),
report.csv (tabular experiments), summary.txt (human-readable) and
meta.json (wall clock and environment; the only non-deterministic file).
Exit codes: 0 success, 2 validation error, 3 solver non-convergence or a
failed experiment precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .config import (EXPERIMENT_NAMES, MAP_NAMES, build_scenario_objects,
                     build_vector, config_sha256, validate_config)
from .errors import (NoBasinJumpError, NonConvergenceError, ScenarioError,
                     TrackLabError)
from .explorer import (SolutionPair, TargetPath, affinity_defect,
                       chebyshev_scan, discontinuity_witness,
                       find_nonunique_target, linearity_defect, linf_demo,
                       tikhonov_sweep, verify_segment_uniqueness)
from .maps_pde import witness_controls
from .problem import TargetTuple
from .reports import Report, dumps_canonical, emit_report
from .solver import grid_oracle, multistart


def _vec(x) -> list:
    return [float(v) for v in np.atleast_1d(x)]


def _multistart_results(report) -> dict:
    n_global = len(report.global_clusters)
    clusters = [
        {
            "J": c.J,
            "size": c.size,
            "global": i < n_global,
            "representative": _vec(c.representative),
        }
        for i, c in enumerate(report.clusters)
    ]
    return {
        "n_starts": report.n_starts,
        "n_converged": report.n_converged,
        "tol_u": report.tol_u,
        "tol_J": report.tol_J,
        "n_global_clusters": n_global,
        "clusters": clusters,
    }


def _multistart_csv(report):
    dim = report.clusters[0].representative.size
    cols = (["seed", "n_starts", "cluster_id", "global", "J", "size"]
            + [f"u_{i}" for i in range(dim)])
    n_global = len(report.global_clusters)
    rows = [
        [report.seed, report.n_starts, i, int(i < n_global), float(c.J), c.size]
        + [float(v) for v in c.representative]
        for i, c in enumerate(report.clusters)
    ]
    return cols, rows


def _pair_dict(pair: SolutionPair) -> dict:
    return {
        "u_first": _vec(pair.u_first),
        "u_second": _vec(pair.u_second),
        "y_first": _vec(pair.y_first),
        "y_second": _vec(pair.y_second),
        "J_first": pair.J_first,
        "J_second": pair.J_second,
        "separation": pair.separation,
    }


def _target_dict(target: TargetTuple) -> dict:
    return {"y_d": _vec(target.y_d), "u_d": _vec(target.u_d)}


def _solver_kwargs(solver_cfg: dict, opts) -> dict:
    return {
        "n_starts": solver_cfg.get("n_starts", 64),
        "box": solver_cfg.get("box", [[-2.0, 2.0]]),
        "opts": opts,
        "tol_u": solver_cfg.get("tol_u", 1e-4),
        "tol_J": solver_cfg.get("tol_J", 1e-7),
    }


def _build_path(ctx, params) -> TargetPath:
    if "path" not in params:
        raise ScenarioError("experiment needs a params.path section")
    pc = params["path"]
    out_dim, in_dim = ctx.map.output_dim, ctx.map.input_dim

    def _tgt(section):
        return TargetTuple(
            build_vector(section["y_d"], out_dim, ctx.state_nodes),
            build_vector(section["u_d"], in_dim, ctx.control_nodes),
        )

    def _hint(key):
        if key not in pc:
            return None
        return build_vector(pc[key], in_dim, ctx.control_nodes)

    return TargetPath(start=_tgt(pc["start"]), end=_tgt(pc["end"]),
                      start_hint=_hint("start_hint"), end_hint=_hint("end_hint"))


def _values_spec(spec) -> np.ndarray:
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float)
    return np.linspace(float(spec["start"]), float(spec["stop"]),
                       int(spec["count"]))


def _run_solve(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    kw = _solver_kwargs(solver_cfg, opts)
    report = multistart(prob, kw["n_starts"], seed, kw["box"], opts=opts,
                        tol_u=kw["tol_u"], tol_J=kw["tol_J"])
    results = _multistart_results(report)
    oracle_points = int(params.get("oracle_points", 0))
    if oracle_points > 0:
        oracle = grid_oracle(prob, kw["box"], oracle_points)
        results["oracle"] = {
            "points_per_dim": oracle.points_per_dim,
            "J_best": oracle.J_best,
            "u_best": _vec(oracle.u_best),
            "n_clusters": len(oracle.cluster_representatives),
            "representatives": [_vec(r) for r in oracle.cluster_representatives],
        }
    cols, rows = _multistart_csv(report)
    return Report(data={"results": results}, csv_columns=cols, csv_rows=rows)


def _run_sweep_nu(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    kw = _solver_kwargs(solver_cfg, opts)
    nu_values = [float(v) for v in params.get("nu_values", [0.5, 1.0, 2.0, 10.0])]
    sweep = tikhonov_sweep(prob, nu_values, n_starts=kw["n_starts"], seed=seed,
                           box=kw["box"], opts=opts, tol_u=kw["tol_u"],
                           tol_J=kw["tol_J"])
    rows_json = [
        {
            "nu": r.nu,
            "n_global_clusters": r.n_global_clusters,
            "J_best": r.J_best,
            "representatives": [_vec(u) for u in r.representatives],
        }
        for r in sweep.rows
    ]
    dim = ctx.map.input_dim
    cols = ["nu", "n_global_clusters", "cluster_id", "J_best"] + [
        f"u_{i}" for i in range(dim)
    ]
    rows = []
    for r in sweep.rows:
        for k, u in enumerate(r.representatives):
            rows.append([float(r.nu), r.n_global_clusters, k, float(r.J_best)]
                        + [float(v) for v in u])
    return Report(data={"results": {"rows": rows_json}},
                  csv_columns=cols, csv_rows=rows)


def _run_affinity(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    from .config import build_norm
    norm = (prob.state_norm if prob is not None
            else build_norm(None, ctx.map.output_dim, ctx.state_h))
    lambdas = [float(v) for v in params.get("lambdas", [0.0, 0.25, 0.5, 0.75, 1.0])]
    if "witness_z" in params:
        m = ctx.map
        if not hasattr(m, "mesh"):
            raise ScenarioError("witness controls need the semilinear map")
        z = build_vector(params["witness_z"], m.input_dim, ctx.control_nodes)
        u1, u2 = witness_controls(z, m.mesh)
    else:
        u1 = build_vector(params["u1"], ctx.map.input_dim, ctx.control_nodes)
        u2 = build_vector(params["u2"], ctx.map.input_dim, ctx.control_nodes)
    per_lambda = [affinity_defect(ctx.map, u1, u2, [lam], norm)
                  for lam in lambdas]
    results = {
        "lambdas": lambdas,
        "per_lambda": per_lambda,
        "defect": max(per_lambda),
        "is_affine_declared": bool(ctx.map.is_affine),
    }
    if "alphas" in params:
        alphas = [float(v) for v in params["alphas"]]
        per_alpha = [linearity_defect(ctx.map, u1, [a], norm) for a in alphas]
        results["linearity"] = {
            "alphas": alphas,
            "per_alpha": per_alpha,
            "defect": max(per_alpha),
        }
    return Report(data={"results": results})


def _run_find_nonunique(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    kw = _solver_kwargs(solver_cfg, opts)
    path = _build_path(ctx, params)
    target, pair = find_nonunique_target(
        prob, path, n_starts=kw["n_starts"], seed=seed, box=kw["box"],
        opts=opts, tol_u=kw["tol_u"], tol_J=kw["tol_J"],
        bisect_tol=float(params.get("bisect_tol", 1e-10)),
    )
    return Report(data={"results": {
        "target": _target_dict(target),
        "pair": _pair_dict(pair),
    }})


def _run_segment(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    kw = _solver_kwargs(solver_cfg, opts)
    path = _build_path(ctx, params)
    target, pair = find_nonunique_target(
        prob, path, n_starts=kw["n_starts"], seed=seed, box=kw["box"],
        opts=opts, tol_u=kw["tol_u"], tol_J=kw["tol_J"],
        bisect_tol=float(params.get("bisect_tol", 1e-10)),
    )
    ridge_prob = prob.with_target(target)
    t_values = [float(t) for t in params.get(
        "t_values", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    first, second = verify_segment_uniqueness(
        ridge_prob, pair, t_values, n_starts=kw["n_starts"], seed=seed,
        box=kw["box"], opts=opts, tol=float(params.get("match_tol", 1e-4)),
        tol_u=kw["tol_u"], tol_J=kw["tol_J"],
        oracle_points=int(params.get("oracle_points", 0)),
    )

    def _branch_dict(rep):
        return {
            "branch": rep.branch,
            "expected_u": _vec(rep.expected_u),
            "verdict": rep.verdict,
            "records": [
                {
                    "t": r.t,
                    "n_global_clusters": r.n_global_clusters,
                    "representative": _vec(r.representative),
                    "distance": r.distance,
                    "ok": r.ok,
                    "oracle_clusters": r.oracle_clusters,
                    "oracle_ok": r.oracle_ok,
                }
                for r in rep.records
            ],
        }

    results = {
        "target": _target_dict(target),
        "pair": _pair_dict(pair),
        "t_values": t_values,
        "branches": [_branch_dict(first), _branch_dict(second)],
        "verdict": first.verdict and second.verdict,
    }
    if "witness_t" in params:
        witness = discontinuity_witness(
            ridge_prob, pair, [float(t) for t in params["witness_t"]],
            n_starts=kw["n_starts"], seed=seed, box=kw["box"], opts=opts,
            tol_u=kw["tol_u"], tol_J=kw["tol_J"],
        )
        results["witness"] = {
            "t_values": witness.t_values,
            "target_distances": witness.target_distances,
            "gaps": witness.gaps,
            "pair_gap": witness.pair_gap,
            "all_unique": witness.all_unique,
            "distances_decreasing": witness.distances_decreasing,
            "certified": witness.certified,
        }
    return Report(data={"results": results})


def _run_scan(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    kw = _solver_kwargs(solver_cfg, opts)
    y_values = _values_spec(params["y_d_values"])
    u_values = _values_spec(params["u_d_values"])
    scan = chebyshev_scan(prob, y_values, u_values,
                          n_starts=kw["n_starts"], seed=seed, box=kw["box"],
                          opts=opts, tol_u=kw["tol_u"], tol_J=kw["tol_J"])
    results = {
        "y_d_values": [float(v) for v in scan.y_d_values],
        "u_d_values": [float(v) for v in scan.u_d_values],
        "multiplicity": [[int(m) for m in row] for row in scan.multiplicity],
        "exceptional": [[float(y), float(u)] for y, u in scan.exceptional],
    }
    cols = ["y_d", "u_d", "multiplicity"]
    rows = []
    for i, yd in enumerate(scan.y_d_values):
        for j, ud in enumerate(scan.u_d_values):
            rows.append([float(yd), float(ud), int(scan.multiplicity[i, j])])
    return Report(data={"results": results}, csv_columns=cols, csv_rows=rows)


def _run_linf_demo(ctx, prob, opts, solver_cfg, params, seed) -> Report:
    demo = linf_demo(
        resolution=int(params.get("resolution", 301)),
        lo=float(params.get("lo", -1.5)),
        hi=float(params.get("hi", 1.5)),
        tol=float(params.get("tol", 1e-6)),
    )
    return Report(data={"results": {
        "J_best": demo.J_best,
        "u_best": _vec(demo.u_best),
        "n_near": demo.n_near,
        "resolution": demo.resolution,
        "tol": demo.tol,
        "near_points": [_vec(pt) for pt in demo.near_points],
    }})


_RUNNERS = {
    "solve": _run_solve,
    "sweep-nu": _run_sweep_nu,
    "affinity": _run_affinity,
    "find-nonunique": _run_find_nonunique,
    "segment": _run_segment,
    "scan": _run_scan,
    "linf-demo": _run_linf_demo,
}


def _summarize(experiment: str, results: dict) -> str:
    lines = [f"experiment: {experiment}"]
    if experiment == "solve":
        lines.append(f"global clusters: {results['n_global_clusters']}")
        for c in results["clusters"]:
            if c["global"]:
                lines.append(
                    f"  u = {c['representative']}  J = {c['J']:.9g}"
                )
    elif experiment == "sweep-nu":
        for row in results["rows"]:
            reps = ", ".join(str(r) for r in row["representatives"])
            lines.append(
                f"nu = {row['nu']:g}: {row['n_global_clusters']} global "
                f"minimizer(s) at {reps}, J = {row['J_best']:.9g}"
            )
    elif experiment == "affinity":
        lines.append(f"affinity defect: {results['defect']:.9g}")
        if "linearity" in results:
            lines.append(f"linearity defect: {results['linearity']['defect']:.9g}")
    elif experiment in ("find-nonunique", "segment"):
        pair = results["pair"]
        lines.append(
            f"certified pair: J = ({pair['J_first']:.9g}, {pair['J_second']:.9g}),"
            f" separation = {pair['separation']:.9g}"
        )
        if experiment == "segment":
            lines.append(f"segment verdict: {results['verdict']}")
            if "witness" in results:
                lines.append(f"witness certified: {results['witness']['certified']}")
    elif experiment == "scan":
        lines.append(f"exceptional targets: {len(results['exceptional'])}")
    elif experiment == "linf-demo":
        lines.append(
            f"J_best = {results['J_best']:.9g} with {results['n_near']} "
            "near-optimal grid points"
        )
    return "\n".join(lines) + "\n"


def run_scenario(cfg: dict, out_dir, seed_override: int | None = None) -> int:
    """Validate, execute and write reports; returns the process exit code."""
    t0 = time.perf_counter()
    try:
        validate_config(cfg)
        ctx, prob, opts, solver_cfg = build_scenario_objects(cfg)
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    experiment = cfg["experiment"]
    seed = int(cfg.get("seed", 0)) if seed_override is None else int(seed_override)
    params = cfg.get("params", {})
    try:
        report = _RUNNERS[experiment](ctx, prob, opts, solver_cfg, params, seed)
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergenceError, NoBasinJumpError, TrackLabError) as exc:
        print(f"experiment failed: {exc}", file=sys.stderr)
        return 3

    envelope = {
        "artifact": "tracklab",
        "version": __version__,
        "experiment": experiment,
        "config_sha256": config_sha256(cfg),
        "seed": seed,
    }
    envelope.update(report.data)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emit_report(Report(data=envelope), "json", out_dir / "report.json")
    if report.has_csv:
        emit_report(report, "csv", out_dir / "report.csv")
    summary = _summarize(experiment, report.data["results"])
    (out_dir / "summary.txt").write_text(summary, encoding="utf-8")
    meta = {
        "wall_clock_s": time.perf_counter() - t0,
        "kernel_backend": BACKEND,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
    }
    (out_dir / "meta.json").write_text(dumps_canonical(meta), encoding="utf-8")
    print(summary, end="")
    print(f"reports written to {out_dir}")
    return 0


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ScenarioError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"config is not valid JSON: {exc}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tracklab",
        description="Experiments on nonuniqueness and instability of "
                    "tracking-type optimal control problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
    p_run.add_argument("--out", default=None,
                       help="override the output directory")

    p_val = sub.add_parser("validate", help="validate a scenario config")
    p_val.add_argument("config")

    sub.add_parser("list-maps", help="list available map names")
    sub.add_parser("list-experiments", help="list available experiments")

    args = parser.parse_args(argv)

    if args.command == "list-maps":
        for name in MAP_NAMES:
            print(name)
        return 0
    if args.command == "list-experiments":
        for name in EXPERIMENT_NAMES:
            print(name)
        return 0

    try:
        cfg = _load_config(args.config)
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        try:
            validate_config(cfg)
        except ScenarioError as exc:
            print(f"validation error: {exc}", file=sys.stderr)
            return 2
        print("config is valid")
        return 0

    out_dir = args.out or cfg.get("output_dir") or (
        "runs/" + Path(args.config).stem
    )
    return run_scenario(cfg, out_dir, seed_override=args.seed)


if __name__ == "__main__":
    sys.exit(main())
