"""Closed-form control-to-state maps.

Every map takes a control vector and returns a state vector. ``is_affine``
is declared metadata, never inferred from evaluations; the explorer's
affinity defect is the ground-truth check for it.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError


class ControlToStateMap:
    """Evaluation contract ``u -> y`` with dimension metadata."""

    input_dim: int
    output_dim: int
    is_affine: bool = False

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if u.shape != (self.input_dim,):
            raise DimensionMismatchError(
                f"{type(self).__name__} expects a control of dimension "
                f"{self.input_dim}, got shape {u.shape}"
            )
        return self.evaluate(u)


class AffineMap(ControlToStateMap):
    """y = K u + c. The reference (excluded) class: exactly affine."""

    is_affine = True

    def __init__(self, matrix, offset=None):
        k = np.atleast_2d(np.asarray(matrix, dtype=float))
        if offset is None:
            offset = np.zeros(k.shape[0])
        c = np.atleast_1d(np.asarray(offset, dtype=float))
        if c.shape != (k.shape[0],):
            raise DimensionMismatchError(
                f"offset shape {c.shape} does not match matrix rows {k.shape[0]}"
            )
        self.matrix = k
        self.offset = c
        self.output_dim, self.input_dim = k.shape

    def evaluate(self, u):
        return self.matrix @ u + self.offset


class AbsMap(ControlToStateMap):
    """y_i = |u_i|. Even, piecewise linear, not affine."""

    def __init__(self, dim: int = 1):
        self.input_dim = self.output_dim = int(dim)

    def evaluate(self, u):
        return np.abs(u)


class SquareMap(ControlToStateMap):
    """y_i = u_i^2. Even, smooth, not affine."""

    def __init__(self, dim: int = 1):
        self.input_dim = self.output_dim = int(dim)

    def evaluate(self, u):
        return u * u
