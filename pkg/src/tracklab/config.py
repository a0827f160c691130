"""Scenario configuration: schema, validation and object builders.

A scenario is one JSON document selecting a map, a problem, solver
options and an experiment. Maps are selected by name; valid names are in
``MAP_NAMES`` and experiments in ``EXPERIMENT_NAMES``.
"""

from __future__ import annotations

import hashlib
import json

import jsonschema
import numpy as np

from .errors import ScenarioError
from .maps_analytic import AbsMap, AffineMap, SquareMap
from .maps_pde import (Mesh1D, ParabolicGrid, ParabolicObstacleMap,
                       SemilinearConfig, SemilinearMap1D)
from .problem import TrackingProblem
from .solver import SolverOptions
from .spaces import GridNorm, WeightedNorm

MAP_NAMES = ("affine", "abs", "square", "semilinear1d", "parabolic-obstacle")
EXPERIMENT_NAMES = ("solve", "scan", "segment", "affinity", "sweep-nu",
                    "linf-demo", "find-nonunique")

_number = {"type": "number"}
_vector = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": _number, "minItems": 1},
        {
            "type": "object",
            "properties": {
                "kind": {"enum": ["zeros", "constant", "sin", "values"]},
                "value": _number,
                "amplitude": _number,
                "frequency": {"type": "integer", "minimum": 1},
                "values": {"type": "array", "items": _number},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
    ]
}
_norm = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["euclidean", "weighted", "grid"]},
        "matrix": {"type": "array"},
        "scale": {"type": "number", "exclusiveMinimum": 0},
        "p": {"type": "number", "exclusiveMinimum": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {
        "experiment": {"enum": list(EXPERIMENT_NAMES)},
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "map": {
            "type": "object",
            "properties": {
                "name": {"enum": list(MAP_NAMES)},
                "dim": {"type": "integer", "minimum": 1},
                "matrix": {"type": "array"},
                "offset": {"type": "array", "items": _number},
                "n": {"type": "integer", "minimum": 2},
                "newton_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
                "T": {"type": "number", "exclusiveMinimum": 0},
                "n_t": {"type": "integer", "minimum": 1},
                "window": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                    "minItems": 2, "maxItems": 2,
                },
                "psi": _vector,
                "psor_tol": {"type": "number", "exclusiveMinimum": 0},
                "psor_max_iter": {"type": "integer", "minimum": 1},
            },
            "required": ["name"],
            "additionalProperties": False,
        },
        "problem": {
            "type": "object",
            "properties": {
                "y_d": _vector,
                "u_d": _vector,
                "p": {"type": "number", "exclusiveMinimum": 1},
                "nu": {"type": "number", "exclusiveMinimum": 0},
                "state_norm": _norm,
                "control_norm": _norm,
            },
            "additionalProperties": False,
        },
        "solver": {
            "type": "object",
            "properties": {
                "n_starts": {"type": "integer", "minimum": 1},
                "box": {"type": "array"},
                "grad_tol": {"type": "number", "exclusiveMinimum": 0},
                "step_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
                "fd_step": {"type": "number", "exclusiveMinimum": 0},
                "tol_u": {"type": "number", "exclusiveMinimum": 0},
                "tol_J": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "params": {"type": "object"},
    },
    "required": ["experiment"],
    "additionalProperties": False,
}


def config_sha256(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def validate_config(cfg: dict) -> None:
    """Schema plus semantic checks; raises ScenarioError with a usable
    message (including the admissible values) on failure."""
    try:
        jsonschema.validate(cfg, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        hint = ""
        if list(exc.absolute_path)[-1:] == ["experiment"]:
            hint = f" (valid experiments: {', '.join(EXPERIMENT_NAMES)})"
        elif list(exc.absolute_path)[-1:] == ["name"]:
            hint = f" (valid maps: {', '.join(MAP_NAMES)})"
        elif list(exc.absolute_path)[-1:] == ["p"]:
            hint = " (admissible range: p in (1, inf))"
        raise ScenarioError(f"config field {path}: {exc.message}{hint}") from exc
    experiment = cfg["experiment"]
    if experiment != "linf-demo" and "map" not in cfg:
        raise ScenarioError(f"experiment {experiment!r} requires a 'map' section")
    if experiment in ("solve", "scan", "segment", "sweep-nu", "find-nonunique"):
        if "problem" not in cfg:
            raise ScenarioError(f"experiment {experiment!r} requires a 'problem' section")
    # build everything once so unhealthy numeric data fails at validation
    if "map" in cfg:
        build_scenario_objects(cfg)


def build_vector(spec, dim: int, nodes: np.ndarray | None = None) -> np.ndarray:
    """Materialize a vector spec: scalar, list, or generator dict.

    ``sin`` generators need grid nodes (PDE maps); for space-time controls
    the caller tiles the spatial profile over the time steps.
    """
    if isinstance(spec, (int, float)):
        return np.full(dim, float(spec))
    if isinstance(spec, list):
        v = np.asarray(spec, dtype=float)
        if v.size != dim:
            raise ScenarioError(f"vector has {v.size} entries, expected {dim}")
        return v
    kind = spec["kind"]
    if kind == "zeros":
        return np.zeros(dim)
    if kind == "constant":
        return np.full(dim, float(spec.get("value", 0.0)))
    if kind == "values":
        return build_vector(list(spec["values"]), dim)
    if kind == "sin":
        if nodes is None:
            raise ScenarioError("'sin' vectors need a mesh (PDE maps only)")
        amp = float(spec.get("amplitude", 1.0))
        freq = int(spec.get("frequency", 1))
        profile = amp * np.sin(freq * np.pi * nodes)
        if dim == nodes.size:
            return profile
        if dim % nodes.size == 0:  # space-time control: tile over steps
            return np.tile(profile, dim // nodes.size)
        raise ScenarioError(
            f"'sin' profile of size {nodes.size} does not embed in dim {dim}"
        )
    raise ScenarioError(f"unknown vector kind {kind!r}")


class MapContext:
    """A built map plus the grid data needed for norms and generators."""

    def __init__(self, map_, state_nodes=None, control_nodes=None,
                 state_h=None, control_h=None):
        self.map = map_
        self.state_nodes = state_nodes
        self.control_nodes = control_nodes
        self.state_h = state_h
        self.control_h = control_h

    @property
    def is_grid_based(self) -> bool:
        return self.state_h is not None


def build_map(map_cfg: dict) -> MapContext:
    name = map_cfg["name"]
    if name == "affine":
        if "matrix" not in map_cfg:
            raise ScenarioError("affine map needs a 'matrix'")
        m = AffineMap(map_cfg["matrix"], map_cfg.get("offset"))
        return MapContext(m)
    if name == "abs":
        return MapContext(AbsMap(map_cfg.get("dim", 1)))
    if name == "square":
        return MapContext(SquareMap(map_cfg.get("dim", 1)))
    if name == "semilinear1d":
        mesh = Mesh1D(map_cfg.get("n", 99))
        cfg = SemilinearConfig(
            mesh=mesh,
            newton_tol=map_cfg.get("newton_tol", 1e-10),
            max_iter=map_cfg.get("max_iter", 50),
        )
        m = SemilinearMap1D(cfg)
        return MapContext(m, state_nodes=mesh.nodes, control_nodes=mesh.nodes,
                          state_h=mesh.h, control_h=mesh.h)
    if name == "parabolic-obstacle":
        mesh = Mesh1D(map_cfg.get("n", 99))
        window = tuple(map_cfg.get("window", (0, mesh.n)))
        psi_spec = map_cfg.get("psi", {"kind": "zeros"})
        psi = build_vector(psi_spec, mesh.n, mesh.nodes)
        grid = ParabolicGrid(mesh=mesh, T=map_cfg.get("T", 1.0),
                             n_t=map_cfg.get("n_t", 50),
                             control_window=window, psi=psi)
        m = ParabolicObstacleMap(grid,
                                 psor_tol=map_cfg.get("psor_tol", 1e-10),
                                 psor_max_iter=map_cfg.get("psor_max_iter", 200_000))
        lo, hi = grid.control_window
        return MapContext(m, state_nodes=mesh.nodes,
                          control_nodes=mesh.nodes[lo:hi],
                          state_h=mesh.h, control_h=grid.tau * mesh.h)
    raise ScenarioError(f"unknown map {name!r}; valid maps: {', '.join(MAP_NAMES)}")


def build_norm(norm_cfg: dict | None, dim: int, grid_h: float | None,
               default_p: float = 2.0):
    """Norm from config; defaults to Euclidean (analytic maps) or the
    discrete L^p grid norm (PDE maps)."""
    if norm_cfg is None:
        if grid_h is not None:
            return GridNorm(grid_h, default_p)
        return WeightedNorm.euclidean(dim)
    kind = norm_cfg["kind"]
    if kind == "euclidean":
        return WeightedNorm.euclidean(dim)
    if kind == "weighted":
        if "matrix" not in norm_cfg:
            raise ScenarioError("weighted norm needs a 'matrix'")
        try:
            return WeightedNorm(np.asarray(norm_cfg["matrix"], dtype=float),
                                norm_cfg.get("scale", 1.0))
        except ValueError as exc:
            raise ScenarioError(f"invalid weighted norm: {exc}") from exc
    if kind == "grid":
        if grid_h is None:
            raise ScenarioError("grid norms apply to PDE maps only")
        return GridNorm(grid_h, norm_cfg.get("p", default_p),
                        norm_cfg.get("scale", 1.0))
    raise ScenarioError(f"unknown norm kind {kind!r}")


def build_scenario_objects(cfg: dict):
    """Build (MapContext | None, TrackingProblem | None, SolverOptions,
    solver cfg).

    The context is None for mapless experiments (linf-demo); the problem
    is None when the config has no 'problem' section (affinity-only and
    linf-demo scenarios).
    """
    ctx = build_map(cfg["map"]) if "map" in cfg else None
    prob = None
    problem_cfg = cfg.get("problem")
    if problem_cfg is not None:
        if ctx is None:
            raise ScenarioError("a 'problem' section needs a 'map' section")
        p = problem_cfg.get("p", 2.0)
        state_norm = build_norm(problem_cfg.get("state_norm"),
                                ctx.map.output_dim, ctx.state_h)
        control_norm = build_norm(problem_cfg.get("control_norm"),
                                  ctx.map.input_dim, ctx.control_h)
        y_d = build_vector(problem_cfg.get("y_d", {"kind": "zeros"}),
                           ctx.map.output_dim, ctx.state_nodes)
        u_d = build_vector(problem_cfg.get("u_d", {"kind": "zeros"}),
                           ctx.map.input_dim, ctx.control_nodes)
        try:
            prob = TrackingProblem(map=ctx.map, y_d=y_d, u_d=u_d, p=p,
                                   state_norm=state_norm,
                                   control_norm=control_norm)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
        nu = problem_cfg.get("nu", 1.0)
        if nu <= 0:
            raise ScenarioError(f"nu must be positive, got {nu}")
        prob = prob.rescale_nu(nu)

    solver_cfg = dict(cfg.get("solver", {}))
    opts = SolverOptions(
        grad_tol=solver_cfg.get("grad_tol", 1e-8),
        step_tol=solver_cfg.get("step_tol", 1e-12),
        max_iter=solver_cfg.get("max_iter", 5000),
        fd_step=solver_cfg.get("fd_step", 1e-6),
    )
    return ctx, prob, opts, solver_cfg
