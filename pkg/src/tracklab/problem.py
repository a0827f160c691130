"""Tracking problem instances and their objective.

A ``TrackingProblem`` bundles a control-to-state map S, a target tuple
(y_d, u_d), an exponent p > 1 and the two norms; its objective is

    J(u) = ||S(u) - y_d||_Y^p + ||u - u_d||_U^p.

A Tikhonov weight nu on the control term is never stored: ``rescale_nu``
absorbs it into the control norm (values scaled by nu^(1/p), so the p-th
power picks up exactly the factor nu), leaving the minimizer set of the
weighted problem unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError
from .maps_analytic import ControlToStateMap


@dataclass(frozen=True)
class TargetTuple:
    """A desired-state / desired-control pair."""

    y_d: np.ndarray
    u_d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y_d", np.atleast_1d(np.asarray(self.y_d, float)))
        object.__setattr__(self, "u_d", np.atleast_1d(np.asarray(self.u_d, float)))


@dataclass(frozen=True)
class TrackingProblem:
    map: ControlToStateMap
    y_d: np.ndarray
    u_d: np.ndarray
    p: float
    state_norm: object
    control_norm: object

    def __post_init__(self):
        y_d = np.atleast_1d(np.asarray(self.y_d, dtype=float))
        u_d = np.atleast_1d(np.asarray(self.u_d, dtype=float))
        if y_d.shape != (self.map.output_dim,):
            raise DimensionMismatchError(
                f"y_d has shape {y_d.shape}, map output dimension is "
                f"{self.map.output_dim}"
            )
        if u_d.shape != (self.map.input_dim,):
            raise DimensionMismatchError(
                f"u_d has shape {u_d.shape}, map input dimension is "
                f"{self.map.input_dim}"
            )
        if not self.p > 1:
            raise ValueError(f"exponent p must lie in (1, inf), got {self.p}")
        object.__setattr__(self, "y_d", y_d)
        object.__setattr__(self, "u_d", u_d)

    @property
    def target(self) -> TargetTuple:
        return TargetTuple(self.y_d, self.u_d)

    def objective(self, u) -> float:
        """J(u); map-evaluation failures propagate with their diagnostics."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        y = self.map(u)
        ny = self.state_norm(y - self.y_d)
        nu = self.control_norm(u - self.u_d)
        return float(ny**self.p + nu**self.p)

    def rescale_nu(self, nu: float) -> "TrackingProblem":
        """Problem with control term weighted by nu, absorbed into the norm."""
        if not nu > 0:
            raise ValueError(f"Tikhonov weight must be positive, got {nu}")
        if nu == 1.0:
            return self
        return replace(
            self, control_norm=self.control_norm.scaled_by(nu ** (1.0 / self.p))
        )

    def with_target(self, target: TargetTuple) -> "TrackingProblem":
        """Same problem at a different target tuple."""
        return replace(self, y_d=target.y_d, u_d=target.u_d)


def gradient_fd(prob: TrackingProblem, u, step: float = 1e-6) -> np.ndarray:
    """Central finite-difference approximation of grad J at u.

    Costs 2*dim objective evaluations. At kinks this returns the symmetric
    difference value, which is what the backtracking line search needs.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all(np.isfinite(u)):
        raise ValueError("gradient requested at a non-finite point")
    g = np.empty_like(u)
    for i in range(u.size):
        e = np.zeros_like(u)
        e[i] = step
        jp = prob.objective(u + e)
        jm = prob.objective(u - e)
        if not (np.isfinite(jp) and np.isfinite(jm)):
            raise ValueError(f"non-finite objective at finite-difference probe {i}")
        g[i] = (jp - jm) / (2.0 * step)
    return g
