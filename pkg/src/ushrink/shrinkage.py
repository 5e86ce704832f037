"""Shrinkage of unbiased Hilbert-space estimates toward a fixed target.

Given an unbiased estimate C_hat of a Hilbert-space element and a target f*,
the shrunk estimate is the convex combination (1 - alpha) C_hat + alpha f*
with the plug-in coefficient

    alpha = delta_hat / (delta_hat + ||C_hat - f*||^2),

where delta_hat estimates the risk E||C_hat - C||^2.  This module provides

* generic enumeration-based risk estimators for U-statistics of any order,
  driven by caller-supplied inner-product evaluation functions;
* closed Gram-matrix forms for the two cases used in practice: the kernel
  mean embedding (order 1) and the kernel covariance operator (order 2,
  zero target), in both the general and the degenerate variant;
* dual-weight representations of shrunk mean embeddings and their pointwise
  evaluation via the reproducing property.

Risk estimators are unbiased and may come out negative on small samples, so
the returned coefficient is the raw ratio clamped to [0, 1]; a vanishing
denominator is resolved to alpha = 0 (no shrinkage).  Squared distances that
round slightly negative (above -1e-9) are snapped to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientSampleError, UnsupportedOperationError
from .kernels import PRECOMPUTED, GramMatrix, KernelSpec, as_dataset, kernel_function
from .ustat import EvalFn, comb_weights, u_stat_perm

GENERAL = "general"
DEGENERATE = "degenerate"

# Cancellation slack: squared distances in (DIST_SQ_FLOOR, 0) become 0.
DIST_SQ_FLOOR = -1e-9

ZERO = "zero"
DUAL = "dual"


@dataclass(frozen=True)
class ShrinkageReport:
    """Risk estimate, squared distance to the target, and the coefficient."""

    delta_hat: float
    dist_sq: float
    alpha_raw: float
    alpha: float
    variant: str

    def to_dict(self) -> dict:
        return {
            "delta_hat": self.delta_hat,
            "dist_sq": self.dist_sq,
            "alpha_raw": self.alpha_raw,
            "alpha": self.alpha,
            "variant": self.variant,
        }


@dataclass(frozen=True)
class TargetSpec:
    """Shrinkage target: zero, or a dual expansion over landmark points."""

    kind: str
    landmarks: np.ndarray | None = None
    coefficients: np.ndarray | None = None

    @classmethod
    def zero(cls) -> "TargetSpec":
        return cls(ZERO)

    @classmethod
    def dual(cls, landmarks, coefficients) -> "TargetSpec":
        pts = as_dataset(landmarks)
        coef = np.asarray(coefficients, dtype=float).ravel()
        if pts.shape[0] != coef.shape[0]:
            raise ValueError(
                f"{pts.shape[0]} landmarks but {coef.shape[0]} coefficients"
            )
        return cls(DUAL, landmarks=pts, coefficients=coef)


@dataclass(frozen=True)
class DualMeanElement:
    """A mean-embedding estimate as weights on kernel sections.

    The element is sum_i data_weights[i] K(., X_i)
    + sum_j target_weights[j] K(., Z_j) for landmark points Z_j.
    """

    data_weights: np.ndarray
    target_weights: np.ndarray
    landmarks: np.ndarray | None = None


def alpha_from(delta_hat: float, dist_sq: float) -> tuple[float, float]:
    """Raw and clamped shrinkage coefficient from a risk estimate.

    Returns ``(alpha_raw, alpha)`` where ``alpha_raw`` is
    delta_hat / (delta_hat + dist_sq) (zero if the denominator vanishes) and
    ``alpha`` is its clamp to [0, 1].  Total function: never raises.
    """
    denom = delta_hat + dist_sq
    raw = 0.0 if denom == 0.0 else delta_hat / denom
    return raw, min(1.0, max(0.0, raw))


def _snap(dist_sq: float) -> float:
    return 0.0 if DIST_SQ_FLOOR < dist_sq < 0.0 else dist_sq


def _entries(gram) -> np.ndarray:
    g = gram.entries if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
    return g


# ---------------------------------------------------------------------------
# generic enumeration-based risk estimators
# ---------------------------------------------------------------------------

def delta_general(
    overlap_products: Sequence[EvalFn],
    disjoint_product: EvalFn,
    data,
    k: int,
    *,
    limit: int | None = None,
) -> float:
    """Unbiased risk estimate of an order-k U-statistic via overlap products.

    ``overlap_products[i-1]`` (i = 1..k) must evaluate the inner product of
    the estimand kernel on two argument blocks sharing their first ``i``
    points, hence has order 2k - i; ``disjoint_product`` evaluates it on
    disjoint blocks (order 2k).  The estimate combines permutation
    U-statistics of these products with hypergeometric weights.
    """
    n = len(data)
    if n < 2 * k:
        raise InsufficientSampleError(f"need n >= 2k, got n={n}, k={k}")
    if len(overlap_products) != k:
        raise ValueError(
            f"expected {k} overlap products, got {len(overlap_products)}"
        )
    for i, fn in enumerate(overlap_products, start=1):
        if fn.order != 2 * k - i:
            raise ValueError(
                f"overlap product sharing {i} points must have order "
                f"{2 * k - i}, got {fn.order}"
            )
    if disjoint_product.order != 2 * k:
        raise ValueError(
            f"disjoint product must have order {2 * k}, got {disjoint_product.order}"
        )
    w = comb_weights(n, k).w
    u_disjoint = u_stat_perm(disjoint_product, data, 2 * k, limit=limit)
    return math.fsum(
        w[i] * (u_stat_perm(overlap_products[i - 1], data, 2 * k - i, limit=limit)
                - u_disjoint)
        for i in range(1, k + 1)
    )


def delta_degen(
    self_product: EvalFn,
    disjoint_product: EvalFn,
    data,
    k: int,
    *,
    limit: int | None = None,
) -> float:
    """Two-term risk estimate assuming a completely degenerate centered kernel.

    Equals ``delta_general`` when k = 1; for k >= 2 it trades a small bias
    outside the degenerate regime for a fixed number of terms.
    """
    n = len(data)
    if n < 2 * k:
        raise InsufficientSampleError(f"need n >= 2k, got n={n}, k={k}")
    if self_product.order != k:
        raise ValueError(
            f"self product must have order {k}, got {self_product.order}"
        )
    if disjoint_product.order != 2 * k:
        raise ValueError(
            f"disjoint product must have order {2 * k}, got {disjoint_product.order}"
        )
    u_self = u_stat_perm(self_product, data, k, limit=limit)
    u_disjoint = u_stat_perm(disjoint_product, data, 2 * k, limit=limit)
    return (u_self - u_disjoint) / math.comb(n, k)


def mean_overlap_products(
    kernel_fn: Callable[[np.ndarray, np.ndarray], float],
) -> tuple[list[EvalFn], EvalFn]:
    """Overlap/disjoint products for the mean embedding (order 1)."""
    shared = EvalFn(order=1, body=lambda x: kernel_fn(x, x), symmetric=True)
    disjoint = EvalFn(order=2, body=kernel_fn, symmetric=True)
    return [shared], disjoint


def covop_overlap_products(
    kernel_fn: Callable[[np.ndarray, np.ndarray], float],
) -> tuple[list[EvalFn], EvalFn]:
    """Overlap/disjoint products for the covariance operator (order 2).

    The estimand kernel maps a pair (x, y) to the rank-one operator built
    from the difference of their kernel sections; inner products of two such
    operators reduce to squared four-point kernel differences.
    """

    def pair_product(x1, x2, x3, x4) -> float:
        diff = (
            kernel_fn(x1, x3)
            - kernel_fn(x1, x4)
            - kernel_fn(x2, x3)
            + kernel_fn(x2, x4)
        )
        return 0.25 * diff * diff

    share_one = EvalFn(order=3, body=lambda a, b, c: pair_product(a, b, a, c))
    share_two = EvalFn(order=2, body=lambda a, b: pair_product(a, b, a, b),
                       symmetric=True)
    disjoint = EvalFn(order=4, body=pair_product)
    return [share_one, share_two], disjoint


# ---------------------------------------------------------------------------
# closed Gram-matrix forms
# ---------------------------------------------------------------------------

def shrink_mean(
    gram,
    target: TargetSpec | None = None,
    cross_gram=None,
    target_gram=None,
) -> tuple[DualMeanElement, ShrinkageReport]:
    """Shrink the empirical mean embedding toward a target, from Gram blocks.

    Parameters
    ----------
    gram
        GramMatrix (or raw n x n array) of the data.
    target
        ``TargetSpec.zero()`` (default) or a dual expansion.  For a dual
        target, ``cross_gram`` (n x L, entries K(X_i, Z_j)) and
        ``target_gram`` (L x L, entries K(Z_j, Z_j')) must be supplied.

    Returns
    -------
    (DualMeanElement, ShrinkageReport)
        The shrunk element carries weights (1 - alpha)/n on the data kernel
        sections and alpha * coefficients on the landmark sections.
    """
    g = _entries(gram)
    n = g.shape[0]
    if n < 2:
        raise InsufficientSampleError(f"need at least 2 observations, got {n}")
    if target is None:
        target = TargetSpec.zero()

    trace = float(np.trace(g))
    total = float(g.sum())
    diag_mean = trace / n
    off_mean = (total - trace) / (n * (n - 1))
    delta = (diag_mean - off_mean) / n

    mean_all = total / (n * n)
    if target.kind == ZERO:
        dist_sq = mean_all
        target_w = np.zeros(0)
        landmarks = None
    else:
        if cross_gram is None or target_gram is None:
            raise ValueError(
                "a dual target requires cross_gram (n x L) and target_gram (L x L)"
            )
        coef = target.coefficients
        cross = np.asarray(cross_gram, dtype=float)
        tg = np.asarray(target_gram, dtype=float)
        if cross.shape != (n, coef.shape[0]):
            raise ValueError(
                f"cross_gram must be {n} x {coef.shape[0]}, got {cross.shape}"
            )
        if tg.shape != (coef.shape[0], coef.shape[0]):
            raise ValueError(
                f"target_gram must be {coef.shape[0]} square, got {tg.shape}"
            )
        cross_term = float(cross.sum(axis=0) @ coef)
        norm_target = float(coef @ tg @ coef)
        dist_sq = mean_all - (2.0 / n) * cross_term + norm_target
        landmarks = target.landmarks

    dist_sq = _snap(dist_sq)
    raw, alpha = alpha_from(delta, dist_sq)
    data_w = np.full(n, (1.0 - alpha) / n)
    if target.kind == DUAL:
        target_w = alpha * target.coefficients
    element = DualMeanElement(data_weights=data_w, target_weights=target_w,
                              landmarks=landmarks)
    report = ShrinkageReport(delta_hat=delta, dist_sq=dist_sq,
                             alpha_raw=raw, alpha=alpha, variant=GENERAL)
    return element, report


def _centered_gram_sums(g: np.ndarray) -> tuple[float, float, float, float]:
    """Sums of squared four-point kernel differences over index tuples.

    Returns (pair, triple, quadruple, unrestricted) where

    * pair         = sum_{i != j}           [G_ii - 2 G_ij + G_jj]^2
    * triple       = sum_{i != j != l}      [G_ii - G_il - G_ij + G_jl]^2
    * quadruple    = sum over four distinct [G_il - G_im - G_jl + G_jm]^2
    * unrestricted = same summand over i != j, l != m only.

    Every summand is invariant under adding row plus column offsets to G, so
    the Gram matrix is double-centered first; this keeps the O(n^2) moment
    identities below well conditioned, since after centering all row sums
    vanish and the aggregates live on the scale of the differences
    themselves.
    """
    n = g.shape[0]
    row_mean = g.mean(axis=1, keepdims=True)
    gc = g - row_mean - row_mean.T + g.mean()
    diag = np.diagonal(gc).copy()
    q = float((gc * gc).sum())
    t2 = float((diag * diag).sum())
    m = diag[:, None] + diag[None, :] - 2.0 * gc
    pair = float((m * m).sum())
    triple_full = n * n * t2 + 3.0 * n * q
    triple = triple_full - pair
    unrestricted = 4.0 * n * n * q
    quadruple = unrestricted - 4.0 * triple_full + 2.0 * pair
    return pair, triple, quadruple, unrestricted


def shrink_covop(gram) -> ShrinkageReport:
    """Shrinkage report for the empirical covariance operator, zero target.

    Assembles the unbiased risk estimate from the pair, triple and quadruple
    sums of squared kernel differences with coefficients
    (2n-4) / (4 C(n,2) P(n,3)), 1 / (4 C(n,2) P(n,2)) and
    -(2n-3) / (4 C(n,2) P(n,4)); the squared norm of the estimate uses the
    unrestricted sum over i != j, l != m.
    """
    g = _entries(gram)
    n = g.shape[0]
    if n < 4:
        raise InsufficientSampleError(f"need at least 4 observations, got {n}")
    pair, triple, quadruple, unrestricted = _centered_gram_sums(g)
    c2 = math.comb(n, 2)
    delta = (
        (2 * n - 4) * triple / (4 * c2 * math.perm(n, 3))
        + pair / (4 * c2 * math.perm(n, 2))
        - (2 * n - 3) * quadruple / (4 * c2 * math.perm(n, 4))
    )
    dist_sq = _snap(unrestricted / (4 * math.perm(n, 2) ** 2))
    raw, alpha = alpha_from(delta, dist_sq)
    return ShrinkageReport(delta_hat=delta, dist_sq=dist_sq,
                           alpha_raw=raw, alpha=alpha, variant=GENERAL)


def shrink_covop_degen(gram) -> ShrinkageReport:
    """Degenerate-variant report for the covariance operator, zero target."""
    g = _entries(gram)
    n = g.shape[0]
    if n < 4:
        raise InsufficientSampleError(f"need at least 4 observations, got {n}")
    pair, _, quadruple, unrestricted = _centered_gram_sums(g)
    c2 = math.comb(n, 2)
    delta = (
        pair / (4 * c2 * math.perm(n, 2))
        - quadruple / (4 * c2 * math.perm(n, 4))
    )
    dist_sq = _snap(unrestricted / (4 * math.perm(n, 2) ** 2))
    raw, alpha = alpha_from(delta, dist_sq)
    return ShrinkageReport(delta_hat=delta, dist_sq=dist_sq,
                           alpha_raw=raw, alpha=alpha, variant=DEGENERATE)


# ---------------------------------------------------------------------------
# dual-element utilities
# ---------------------------------------------------------------------------

def evaluate_mean(element: DualMeanElement, spec: KernelSpec, data, x) -> float:
    """Evaluate the shrunk mean embedding at a point via reproduction.

    Computes sum_i w_i K(x, X_i) + sum_j t_j K(x, Z_j); requires a kernel
    that can be evaluated at new points (not precomputed).
    """
    if spec.kind == PRECOMPUTED:
        raise UnsupportedOperationError(
            "pointwise evaluation needs a kernel, not a precomputed matrix"
        )
    k = kernel_function(spec)
    pts = as_dataset(data)
    if pts.shape[0] != element.data_weights.shape[0]:
        raise ValueError(
            f"{element.data_weights.shape[0]} weights for {pts.shape[0]} points"
        )
    terms = [w * k(x, p) for w, p in zip(element.data_weights, pts)]
    if element.target_weights.size:
        terms.extend(
            t * k(x, z) for t, z in zip(element.target_weights, element.landmarks)
        )
    return math.fsum(terms)


def dual_norm_sq(
    element: DualMeanElement,
    gram,
    cross_gram=None,
    target_gram=None,
) -> float:
    """Squared norm of a dual element from Gram blocks.

    w^T G w + 2 w^T C t + t^T T t for data weights w, target weights t,
    cross block C and target block T.  The blocks may be omitted when the
    element carries no target weights.
    """
    g = _entries(gram)
    w = element.data_weights
    value = float(w @ g @ w)
    t = element.target_weights
    if t.size:
        if cross_gram is None or target_gram is None:
            raise ValueError("target weights present but Gram blocks missing")
        cross = np.asarray(cross_gram, dtype=float)
        tg = np.asarray(target_gram, dtype=float)
        value += 2.0 * float(w @ cross @ t) + float(t @ tg @ t)
    return value
