"""Norms on the state and control spaces.

Two concrete norm families cover everything the experiments need:

* ``WeightedNorm`` -- ``(scale * x^T W x)^(1/2)`` with symmetric positive
  definite ``W``.  The ``scale`` absorbs constant factors such as 1/2 or a
  Tikhonov weight, so the rest of the code only ever sees norms.
* ``GridNorm`` -- a discrete L^p norm ``(scale * h * sum |v_i|^p)^(1/p)``
  for nodal values on a uniform grid; ``h`` is the per-node quadrature
  weight (cell measure), so space-time grids just pass ``h = tau * h_x``.

``product_norm`` combines a state norm value and a control norm value into
the norm on the product space, ``(ny^p + nu^p)^(1/p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError

_SYM_TOL = 1e-12


@dataclass(frozen=True)
class WeightedNorm:
    """Norm ``x -> sqrt(scale * x^T W x)`` with SPD weight matrix ``W``."""

    weight: np.ndarray
    scale: float = 1.0
    _chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        sym_defect = np.max(np.abs(w - w.T))
        if sym_defect > _SYM_TOL * max(1.0, np.max(np.abs(w))):
            raise ValueError(f"weight matrix not symmetric (defect {sym_defect:.2e})")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        # Fail fast on non-SPD weights; the factor also evaluates the norm.
        try:
            chol = np.linalg.cholesky(w)
        except np.linalg.LinAlgError as exc:
            raise ValueError("weight matrix is not positive definite") from exc
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "_chol", chol)

    @classmethod
    def euclidean(cls, dim: int) -> "WeightedNorm":
        """Identity weight and unit scale: the plain Euclidean norm."""
        return cls(np.eye(dim), 1.0)

    @property
    def dim(self) -> int:
        return self.weight.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(
                f"expected vector of dimension {self.dim}, got shape {x.shape}"
            )
        # x^T W x = |L^T x|^2 with W = L L^T; guarantees a nonnegative radicand.
        z = self._chol.T @ x
        return float(np.sqrt(self.scale * (z @ z)))

    def scaled_by(self, alpha: float) -> "WeightedNorm":
        """Return the norm whose values are ``alpha`` times this one's."""
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        return WeightedNorm(self.weight, self.scale * alpha**2)


@dataclass(frozen=True)
class GridNorm:
    """Discrete L^p norm ``v -> (scale * h * sum |v_i|^p)^(1/p)``.

    Nodal values live on interior nodes only; boundary nodes held at zero
    carry no quadrature weight.
    """

    h: float
    p: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"mesh width must be positive, got {self.h}")
        if not self.p > 1:
            raise ValueError(f"grid norm exponent must exceed 1, got {self.p}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def __call__(self, v) -> float:
        v = np.asarray(v, dtype=float).ravel()
        if v.size == 0:
            raise DimensionMismatchError("grid norm of an empty nodal vector")
        return float((self.scale * self.h * np.sum(np.abs(v) ** self.p)) ** (1.0 / self.p))

    def scaled_by(self, alpha: float) -> "GridNorm":
        """Return the norm whose values are ``alpha`` times this one's."""
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        return GridNorm(self.h, self.p, self.scale * alpha**self.p)


def product_norm(ny: float, nu: float, p: float) -> float:
    """Norm of a (state, control) pair from its component norm values."""
    if p <= 1:
        raise ValueError(f"product norm exponent must lie in (1, inf), got {p}")
    if ny < 0 or nu < 0:
        raise ValueError("component norm values must be nonnegative")
    return float((ny**p + nu**p) ** (1.0 / p))
