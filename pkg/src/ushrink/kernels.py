"""Positive-definite kernels and Gram matrix construction.

Every estimator in this package consumes data only through pairwise kernel
evaluations, so the n x n Gram matrix is the sufficient statistic for all
downstream computations.  Three built-in kernel families are provided plus a
precomputed variant for matrices produced elsewhere.

Parameterizations:

* linear:       K(x, y) = <x, y>
* gaussian:     K(x, y) = exp(-||x - y||^2 / bandwidth)
* exponential:  K(x, y) = exp(<x, y> / scale)

Setting ``bandwidth = scale = 1`` recovers the unit-parameter forms.
Precomputed matrices are validated for symmetry but *not* projected onto the
positive semi-definite cone; supplying a PSD matrix is the caller's
responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError, UnsupportedOperationError

LINEAR = "linear"
GAUSSIAN = "gaussian"
EXPONENTIAL = "exponential"
PRECOMPUTED = "precomputed"

_KINDS = (LINEAR, GAUSSIAN, EXPONENTIAL, PRECOMPUTED)

# Maximum allowed relative asymmetry of a user-supplied Gram matrix.
SYMMETRY_RTOL = 1e-9


def as_dataset(data) -> np.ndarray:
    """Coerce observations to a float (n, d) array; 1-D input becomes (n, 1)."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"dataset must be 1-D or 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("dataset is empty")
    return arr


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family together with its hyperparameter.

    Use the classmethod constructors rather than instantiating directly.
    """

    kind: str
    bandwidth: float = 1.0
    scale: float = 1.0
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown kernel kind {self.kind!r}")
        if self.kind == GAUSSIAN and not self.bandwidth > 0:
            raise ParameterError("gaussian kernel requires bandwidth > 0")
        if self.kind == EXPONENTIAL and not self.scale > 0:
            raise ParameterError("exponential kernel requires scale > 0")
        if self.kind == PRECOMPUTED:
            m = np.asarray(self.matrix, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ParameterError(
                    f"precomputed kernel matrix must be square, got shape {m.shape}"
                )
            scale = max(1.0, float(np.abs(m).max()) if m.size else 1.0)
            if float(np.abs(m - m.T).max()) > SYMMETRY_RTOL * scale:
                raise ParameterError(
                    "precomputed kernel matrix is not symmetric within tolerance"
                )
            object.__setattr__(self, "matrix", m)

    @classmethod
    def linear(cls) -> "KernelSpec":
        return cls(LINEAR)

    @classmethod
    def gaussian(cls, bandwidth: float = 1.0) -> "KernelSpec":
        return cls(GAUSSIAN, bandwidth=float(bandwidth))

    @classmethod
    def exponential(cls, scale: float = 1.0) -> "KernelSpec":
        return cls(EXPONENTIAL, scale=float(scale))

    @classmethod
    def precomputed(cls, matrix) -> "KernelSpec":
        return cls(PRECOMPUTED, matrix=np.asarray(matrix, dtype=float))


@dataclass(frozen=True)
class GramMatrix:
    """Symmetrized n x n matrix of pairwise kernel evaluations."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate K(x, y) for a single pair of points.

    Raises
    ------
    UnsupportedOperationError
        If ``spec`` is precomputed (there is nothing to evaluate at new points).
    ValueError
        If ``x`` and ``y`` have different dimensions.
    """
    if spec.kind == PRECOMPUTED:
        raise UnsupportedOperationError(
            "a precomputed kernel cannot be evaluated at new points"
        )
    xv = np.asarray(x, dtype=float).ravel()
    yv = np.asarray(y, dtype=float).ravel()
    if xv.shape != yv.shape:
        raise ValueError(
            f"points have mismatched dimensions {xv.shape[0]} and {yv.shape[0]}"
        )
    if spec.kind == LINEAR:
        return float(np.dot(xv, yv))
    if spec.kind == GAUSSIAN:
        diff = xv - yv
        return float(np.exp(-np.dot(diff, diff) / spec.bandwidth))
    return float(np.exp(np.dot(xv, yv) / spec.scale))


def kernel_function(spec: KernelSpec) -> Callable[[np.ndarray, np.ndarray], float]:
    """Bind ``spec`` into a two-argument kernel callable."""
    if spec.kind == PRECOMPUTED:
        raise UnsupportedOperationError(
            "a precomputed kernel cannot be evaluated at new points"
        )
    return lambda x, y: eval_kernel(spec, x, y)


def gram(spec: KernelSpec, data) -> GramMatrix:
    """Build the Gram matrix [K(X_i, X_j)]_{i,j} over a dataset.

    The result is symmetrized as (G + G^T) / 2 so downstream symmetry
    invariants hold exactly in floating point.  For a precomputed spec the
    stored matrix is returned (symmetrized), and its dimension must equal the
    number of observations.
    """
    x = as_dataset(data)
    n = x.shape[0]
    if spec.kind == PRECOMPUTED:
        m = spec.matrix
        if m.shape[0] != n:
            raise ValueError(
                f"precomputed matrix is {m.shape[0]} x {m.shape[0]} "
                f"but the dataset has {n} observations"
            )
        return GramMatrix(_symmetrize(m))
    if spec.kind == LINEAR:
        g = x @ x.T
    elif spec.kind == GAUSSIAN:
        sq = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
        g = np.exp(-sq / spec.bandwidth)
    else:
        g = np.exp(x @ x.T / spec.scale)
    return GramMatrix(_symmetrize(g))


def gram_from_matrix(matrix) -> GramMatrix:
    """Wrap an externally computed kernel matrix, validating symmetry."""
    spec = KernelSpec.precomputed(matrix)
    return GramMatrix(_symmetrize(spec.matrix))


def load_gram_csv(path) -> GramMatrix:
    """Load a precomputed Gram matrix from CSV (square numeric, no header)."""
    m = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    return gram_from_matrix(m)


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return (np.asarray(m, dtype=float) + np.asarray(m, dtype=float).T) / 2.0
