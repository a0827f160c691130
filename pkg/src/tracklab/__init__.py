"""Numerical laboratory for nonuniqueness and instability of
tracking-type optimal control problems.

Minimize ||S(u) - y_d||_Y^p + ||u - u_d||_U^p over controls u, where the
control-to-state map S is non-affine (closed-form maps, a nonsmooth
semilinear PDE, a parabolic obstacle flow). The experiments locate
targets (y_d, u_d) with several global minimizers and demonstrate that no
continuous selection of minimizers exists.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .errors import (DimensionMismatchError, NoBasinJumpError,
                     NonConvergenceError, ScenarioError, TrackLabError)
from .maps_analytic import AbsMap, AffineMap, ControlToStateMap, SquareMap
from .maps_pde import (Mesh1D, ParabolicGrid, ParabolicObstacleMap,
                       SemilinearConfig, SemilinearMap1D, solve_obstacle_lcp,
                       solve_parabolic_obstacle, solve_semilinear,
                       witness_controls)
from .problem import TargetTuple, TrackingProblem, gradient_fd
from .solver import (LocalSolveResult, MultistartReport, SolverOptions,
                     cluster_minimizers, grid_oracle, local_minimize,
                     multistart)
from .spaces import GridNorm, WeightedNorm, product_norm

__all__ = [
    "__version__", "kernel_backend",
    "DimensionMismatchError", "NoBasinJumpError", "NonConvergenceError",
    "ScenarioError", "TrackLabError",
    "AbsMap", "AffineMap", "ControlToStateMap", "SquareMap",
    "Mesh1D", "ParabolicGrid", "ParabolicObstacleMap", "SemilinearConfig",
    "SemilinearMap1D", "solve_obstacle_lcp", "solve_parabolic_obstacle",
    "solve_semilinear", "witness_controls",
    "TargetTuple", "TrackingProblem", "gradient_fd",
    "LocalSolveResult", "MultistartReport", "SolverOptions",
    "cluster_minimizers", "grid_oracle", "local_minimize", "multistart",
    "GridNorm", "WeightedNorm", "product_norm",
]
