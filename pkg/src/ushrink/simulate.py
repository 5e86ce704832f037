"""Monte Carlo estimation of estimator risk.

Randomness
----------
All draws come from numpy's counter-based Philox bit generator.
``sample(dist, n, seed)`` is a pure function of its arguments, and
``mc_risk`` seeds replication ``r`` with ``seed + r``, so every replication
is an independent, addressable stream: results are bit-reproducible and two
estimators evaluated with the same base seed see identical datasets
(paired comparisons come for free).  Aggregation uses exact (Shewchuk)
summation, so the reported risk does not depend on accumulation order.

Risk metrics
------------
Squared Euclidean distance for vector estimands, squared Frobenius distance
for covariance matrices.  For mean embeddings under a nonlinear kernel the
risk is expanded as ||E||^2 - 2 <E, C> + ||C||^2 in the kernel's Hilbert
space; the two population terms are closed-form Gaussian integrals
(``gaussian_kernel_location_moment`` and ``gaussian_embed_norm_sq`` below),
available for spherical Gaussian inputs under the Gaussian kernel and
unit-tested against numerical quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import covmat, normalmean
from .errors import CapabilityError, ParameterError
from .kernels import GAUSSIAN, LINEAR, KernelSpec, gram
from .shrinkage import GENERAL, TargetSpec, ZERO, alpha_from, shrink_mean

RNG_ALGORITHM = "Philox4x64 (numpy.random.Philox), keyed directly by the seed"

SPHERICAL_GAUSSIAN = "spherical_gaussian"
DIAG_GAUSSIAN = "diag_gaussian"
UNIFORM_BOX = "uniform_box"

SAMPLE_MEAN = "sample_mean"
MU_CHECK = "mu_check"
MU_CHECK_C = "mu_check_c"
FIXED_ALPHA_MEAN = "fixed_alpha_mean"
MEAN_EMBED_SHRINK = "mean_embed_shrink"
COV_MAT_SHRINK = "cov_mat_shrink"
COV_MAT_PLAIN = "cov_mat_plain"

MIN_REPS = 100


@dataclass(frozen=True)
class DistSpec:
    """Sampling distribution with analytically known mean and covariance."""

    kind: str
    mu: np.ndarray | None = None
    sigma: float | None = None
    sigmas: np.ndarray | None = None
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None

    @classmethod
    def spherical_gaussian(cls, mu, sigma: float) -> "DistSpec":
        mu = np.asarray(mu, dtype=float).ravel()
        if not sigma > 0:
            raise ParameterError(f"sigma must be positive, got {sigma}")
        return cls(SPHERICAL_GAUSSIAN, mu=mu, sigma=float(sigma))

    @classmethod
    def diag_gaussian(cls, mu, sigmas) -> "DistSpec":
        mu = np.asarray(mu, dtype=float).ravel()
        sigmas = np.asarray(sigmas, dtype=float).ravel()
        if mu.shape != sigmas.shape:
            raise ParameterError("mu and sigmas must have the same dimension")
        if not np.all(sigmas > 0):
            raise ParameterError("all sigmas must be positive")
        return cls(DIAG_GAUSSIAN, mu=mu, sigmas=sigmas)

    @classmethod
    def uniform_box(cls, lo, hi) -> "DistSpec":
        lo = np.asarray(lo, dtype=float).ravel()
        hi = np.asarray(hi, dtype=float).ravel()
        if lo.shape != hi.shape:
            raise ParameterError("lo and hi must have the same dimension")
        if not np.all(lo < hi):
            raise ParameterError("need lo < hi componentwise")
        return cls(UNIFORM_BOX, lo=lo, hi=hi)

    @property
    def dim(self) -> int:
        if self.kind == UNIFORM_BOX:
            return self.lo.shape[0]
        return self.mu.shape[0]

    @property
    def mean(self) -> np.ndarray:
        if self.kind == UNIFORM_BOX:
            return (self.lo + self.hi) / 2.0
        return self.mu

    @property
    def covariance(self) -> np.ndarray:
        if self.kind == SPHERICAL_GAUSSIAN:
            return self.sigma**2 * np.eye(self.dim)
        if self.kind == DIAG_GAUSSIAN:
            return np.diag(self.sigmas**2)
        return np.diag((self.hi - self.lo) ** 2 / 12.0)

    @property
    def trace_cov(self) -> float:
        return float(np.trace(self.covariance))


@dataclass(frozen=True)
class EstimatorSpec:
    """An estimator to be benchmarked by the Monte Carlo harness."""

    kind: str
    c: float | None = None
    alpha: float | None = None
    kernel: KernelSpec | None = None
    target: TargetSpec | None = None
    tau: float | None = None
    variant: str | None = None

    @classmethod
    def sample_mean(cls) -> "EstimatorSpec":
        return cls(SAMPLE_MEAN)

    @classmethod
    def mu_check(cls) -> "EstimatorSpec":
        return cls(MU_CHECK)

    @classmethod
    def mu_check_c(cls, c: float) -> "EstimatorSpec":
        if not 0.0 < c < 2.0:
            raise ParameterError(f"damping constant c must lie in (0, 2), got {c}")
        return cls(MU_CHECK_C, c=float(c))

    @classmethod
    def fixed_alpha_mean(cls, alpha: float) -> "EstimatorSpec":
        if not 0.0 <= alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
        return cls(FIXED_ALPHA_MEAN, alpha=float(alpha))

    @classmethod
    def mean_embed_shrink(
        cls, kernel: KernelSpec, target: TargetSpec | None = None
    ) -> "EstimatorSpec":
        return cls(MEAN_EMBED_SHRINK, kernel=kernel,
                   target=target or TargetSpec.zero())

    @classmethod
    def cov_mat_shrink(cls, tau: float = 1.0, variant: str = GENERAL) -> "EstimatorSpec":
        return cls(COV_MAT_SHRINK, tau=float(tau), variant=variant)

    @classmethod
    def cov_mat_plain(cls) -> "EstimatorSpec":
        return cls(COV_MAT_PLAIN)

    def label(self) -> str:
        if self.kind == MU_CHECK_C:
            return f"mu_check_c({self.c:g})"
        if self.kind == FIXED_ALPHA_MEAN:
            return f"fixed_alpha_mean({self.alpha:g})"
        if self.kind == MEAN_EMBED_SHRINK:
            return f"mean_embed_shrink({self.kernel.kind})"
        if self.kind == COV_MAT_SHRINK:
            return f"cov_mat_shrink(tau={self.tau:g},{self.variant})"
        return self.kind


@dataclass(frozen=True)
class RiskEstimate:
    """Monte Carlo mean squared error with its standard error."""

    mean_sq_error: float
    std_error: float
    reps: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "mean_sq_error": self.mean_sq_error,
            "std_error": self.std_error,
            "reps": self.reps,
            "seed": self.seed,
        }


def sample(dist: DistSpec, n: int, seed: int) -> np.ndarray:
    """Draw n i.i.d. observations; deterministic in (dist, n, seed)."""
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    if seed < 0:
        raise ParameterError(f"seed must be a nonnegative integer, got {seed}")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    d = dist.dim
    if dist.kind == SPHERICAL_GAUSSIAN:
        return dist.mu + dist.sigma * rng.standard_normal((n, d))
    if dist.kind == DIAG_GAUSSIAN:
        return dist.mu + dist.sigmas * rng.standard_normal((n, d))
    return dist.lo + (dist.hi - dist.lo) * rng.random((n, d))


# ---------------------------------------------------------------------------
# closed-form Gaussian kernel moments
# ---------------------------------------------------------------------------

def gaussian_kernel_location_moment(points, mu, sigma: float, bandwidth: float):
    """E_Y[K(x, Y)] for Y ~ N(mu, sigma^2 I) and K(x, y) = exp(-||x-y||^2/b).

    Completing the square in each coordinate of the Gaussian integral gives

        E_Y exp(-(x_c - Y_c)^2 / b)
          = sqrt(b / (b + 2 sigma^2)) * exp(-(x_c - mu_c)^2 / (b + 2 sigma^2)),

    and the d coordinates multiply.  ``points`` may be a single point or an
    (n, d) array; returns a float or an array of per-row values.
    """
    x = np.asarray(points, dtype=float)
    squeeze = x.ndim == 1
    x = np.atleast_2d(x)
    mu = np.asarray(mu, dtype=float).ravel()
    b = float(bandwidth)
    denom = b + 2.0 * sigma**2
    d = mu.shape[0]
    pref = (b / denom) ** (d / 2.0)
    vals = pref * np.exp(-np.sum((x - mu) ** 2, axis=1) / denom)
    return float(vals[0]) if squeeze else vals


def gaussian_embed_norm_sq(d: int, sigma: float, bandwidth: float) -> float:
    """||E_X K(., X)||^2 for X ~ N(mu, sigma^2 I), any mu.

    Equals E[K(X, X')] for independent copies; X - X' ~ N(0, 2 sigma^2 I),
    and E exp(-Z^2/b) = sqrt(b / (b + 2 s^2)) for Z ~ N(0, s^2) per
    coordinate, so the value is (b / (b + 4 sigma^2))^(d/2).
    """
    b = float(bandwidth)
    return (b / (b + 4.0 * sigma**2)) ** (d / 2.0)


# ---------------------------------------------------------------------------
# replication engine
# ---------------------------------------------------------------------------

_MEAN_KINDS = (SAMPLE_MEAN, MU_CHECK, MU_CHECK_C, FIXED_ALPHA_MEAN)


def _check_supported(est: EstimatorSpec, dist: DistSpec) -> None:
    if est.kind in _MEAN_KINDS or est.kind in (COV_MAT_SHRINK, COV_MAT_PLAIN):
        return
    if est.kind == MEAN_EMBED_SHRINK:
        if est.target is not None and est.target.kind != ZERO:
            raise CapabilityError(
                "embedding risk is only implemented for the zero target"
            )
        if est.kernel.kind == LINEAR:
            return
        if est.kernel.kind == GAUSSIAN:
            if dist.kind != SPHERICAL_GAUSSIAN:
                raise CapabilityError(
                    "Gaussian-kernel embedding risk needs spherical Gaussian "
                    f"inputs, got {dist.kind}"
                )
            return
        raise CapabilityError(
            f"no closed-form embedding moments for the {est.kernel.kind} kernel"
        )
    raise CapabilityError(f"unknown estimator kind {est.kind!r}")


def _replicate(est: EstimatorSpec, dist: DistSpec, n: int,
               rep_seed: int) -> tuple[float, float]:
    """One replication: (squared error, shrinkage coefficient or nan)."""
    data = sample(dist, n, rep_seed)
    kind = est.kind

    if kind in _MEAN_KINDS:
        mu = dist.mean
        if kind == SAMPLE_MEAN:
            diff = data.mean(axis=0) - mu
            return float(diff @ diff), math.nan
        if kind == FIXED_ALPHA_MEAN:
            diff = (1.0 - est.alpha) * data.mean(axis=0) - mu
            return float(diff @ diff), est.alpha
        c = 1.0 if kind == MU_CHECK else est.c
        res = normalmean.mu_check_c(data, c)
        diff = res.estimate - mu
        return float(diff @ diff), res.alpha

    if kind == COV_MAT_PLAIN:
        cov = dist.covariance
        xc = data - data.mean(axis=0)
        c_hat = xc.T @ xc / (n - 1)
        diff = c_hat - cov
        return float(np.sum(diff * diff)), math.nan

    if kind == COV_MAT_SHRINK:
        cov = dist.covariance
        res = covmat.shrink_cov_matrix(data, tau=est.tau, variant=est.variant)
        diff = res.shrunk - cov
        return float(np.sum(diff * diff)), res.report.alpha

    # mean embedding
    if est.kernel.kind == LINEAR:
        res = normalmean.mu_check(data)
        diff = res.estimate - dist.mean
        return float(diff @ diff), res.alpha
    _, report = shrink_mean(gram(est.kernel, data))
    w = 1.0 - report.alpha
    cross = gaussian_kernel_location_moment(
        data, dist.mu, dist.sigma, est.kernel.bandwidth
    )
    norm_c = gaussian_embed_norm_sq(dist.dim, dist.sigma, est.kernel.bandwidth)
    err = w * w * report.dist_sq - 2.0 * w * float(cross.mean()) + norm_c
    return err, report.alpha


def mc_detail(est: EstimatorSpec, dist: DistSpec, n: int, reps: int,
              seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-replication squared errors and shrinkage coefficients.

    Replication r is seeded with seed + r.  The coefficient array is nan for
    estimators without one (sample mean, plain covariance).
    """
    if reps < 1:
        raise ParameterError(f"need reps >= 1, got {reps}")
    _check_supported(est, dist)
    errs = np.empty(reps)
    alphas = np.empty(reps)
    for r in range(reps):
        errs[r], alphas[r] = _replicate(est, dist, n, seed + r)
    return errs, alphas


def mc_errors(est: EstimatorSpec, dist: DistSpec, n: int, reps: int,
              seed: int) -> np.ndarray:
    """Per-replication squared errors; replication r is seeded with seed + r."""
    return mc_detail(est, dist, n, reps, seed)[0]


def mc_alphas(est: EstimatorSpec, dist: DistSpec, n: int, reps: int,
              seed: int) -> np.ndarray:
    """Per-replication shrinkage coefficients for estimators that have one."""
    if est.kind in (SAMPLE_MEAN, COV_MAT_PLAIN):
        raise CapabilityError(f"{est.kind} has no shrinkage coefficient")
    return mc_detail(est, dist, n, reps, seed)[1]


def summarize_errors(errs: np.ndarray, reps: int, seed: int) -> RiskEstimate:
    """Order-independent mean and standard error of per-replication errors."""
    mse = math.fsum(errs) / len(errs)
    if len(errs) > 1:
        var = math.fsum((e - mse) ** 2 for e in errs) / (len(errs) - 1)
    else:
        var = 0.0
    return RiskEstimate(
        mean_sq_error=mse,
        std_error=math.sqrt(var / len(errs)),
        reps=reps,
        seed=seed,
    )


def mc_risk(est: EstimatorSpec, dist: DistSpec, n: int, reps: int,
            seed: int) -> RiskEstimate:
    """Monte Carlo risk of an estimator against the analytic estimand.

    Requires reps >= 100; smaller runs are statistically meaningless and are
    rejected rather than reported.
    """
    if reps < MIN_REPS:
        raise ParameterError(f"need reps >= {MIN_REPS}, got {reps}")
    errs = mc_errors(est, dist, n, reps, seed)
    return summarize_errors(errs, reps, seed)


# ---------------------------------------------------------------------------
# population-optimal coefficient and rate fitting
# ---------------------------------------------------------------------------

def oracle_alpha(dist: DistSpec, est: EstimatorSpec, n: int) -> float:
    """Population-optimal shrinkage coefficient for tractable configurations.

    Supported: mean estimation toward zero (linear kernel or the normal-mean
    estimators), where the risk is trace(Cov)/n and the squared target
    distance is ||mean||^2; and the Gaussian-kernel mean embedding of a
    spherical Gaussian toward zero, via the closed-form kernel moments.
    """
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    linear_mean = est.kind in (MU_CHECK, MU_CHECK_C, FIXED_ALPHA_MEAN) or (
        est.kind == MEAN_EMBED_SHRINK and est.kernel.kind == LINEAR
    )
    if linear_mean:
        if (est.kind == MEAN_EMBED_SHRINK and est.target is not None
                and est.target.kind != ZERO):
            raise CapabilityError("oracle coefficient assumes the zero target")
        delta = dist.trace_cov / n
        mean = dist.mean
        return alpha_from(delta, float(mean @ mean))[1]
    if est.kind == MEAN_EMBED_SHRINK and est.kernel.kind == GAUSSIAN:
        if est.target is not None and est.target.kind != ZERO:
            raise CapabilityError("oracle coefficient assumes the zero target")
        if dist.kind != SPHERICAL_GAUSSIAN:
            raise CapabilityError(
                "Gaussian-kernel oracle needs spherical Gaussian inputs"
            )
        norm_c = gaussian_embed_norm_sq(dist.dim, dist.sigma, est.kernel.bandwidth)
        delta = (1.0 - norm_c) / n
        return alpha_from(delta, norm_c)[1]
    raise CapabilityError(
        f"no analytic oracle for estimator {est.kind!r} under {dist.kind!r}"
    )


def rate_slope(points) -> float:
    """Least-squares slope of log(risk) against log(n).

    Needs at least three (n, risk) points, all strictly positive.
    """
    pts = list(points)
    if len(pts) < 3:
        raise ParameterError(f"need at least 3 points, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    risks = np.array([p[1] for p in pts], dtype=float)
    if np.any(ns <= 0) or np.any(risks <= 0):
        raise ParameterError("all n and risk values must be positive")
    slope, _ = np.polyfit(np.log(ns), np.log(risks), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# named experiments
# ---------------------------------------------------------------------------

DEFAULT_SEED = 42

_EXPERIMENTS = {
    "mean-improvement": "paired improvement of the shrunk mean, d=10, n=5",
    "damped-improvement": "paired improvement of the damped shrunk mean at d=3, n=10",
    "consistency": "risk decay of Gaussian-kernel embedding shrinkage over n",
    "oracle": "fixed oracle-coefficient dominance, d=3, n=10",
}


def experiment_names() -> list[str]:
    return sorted(_EXPERIMENTS)


def _risk_row(est: EstimatorSpec, dist: DistSpec, n: int, reps: int,
              seed: int) -> dict:
    risk = mc_risk(est, dist, n, reps, seed)
    return {
        "estimator": est.label(),
        "n": n,
        "d": dist.dim,
        "reps": reps,
        "mse": risk.mean_sq_error,
        "stderr": risk.std_error,
    }


def _paired_summary(est_a, est_b, dist, n, reps, seed) -> dict:
    errs_a = mc_errors(est_a, dist, n, reps, seed)
    errs_b = mc_errors(est_b, dist, n, reps, seed)
    diff = errs_a - errs_b
    summary = summarize_errors(diff, reps, seed)
    return {
        "difference": f"{est_a.label()} - {est_b.label()}",
        "mean": summary.mean_sq_error,
        "stderr": summary.std_error,
    }


def run_experiment(
    name: str,
    *,
    reps: int | None = None,
    seed: int = DEFAULT_SEED,
    n_grid: Optional[list[int]] = None,
) -> dict:
    """Run a canned simulation and return a JSON-ready result dict."""
    if name not in _EXPERIMENTS:
        raise ParameterError(
            f"unknown experiment {name!r}; choose from {experiment_names()}"
        )
    out: dict = {"experiment": name, "description": _EXPERIMENTS[name],
                 "seed": seed, "results": []}

    if name == "mean-improvement":
        reps = 10**5 if reps is None else reps
        mu = np.zeros(10)
        mu[0] = 1.0
        dist = DistSpec.spherical_gaussian(mu, 1.0)
        plain, shrunk = EstimatorSpec.sample_mean(), EstimatorSpec.mu_check()
        out["results"] = [
            _risk_row(e, dist, 5, reps, seed) for e in (plain, shrunk)
        ]
        out["paired"] = _paired_summary(shrunk, plain, dist, 5, reps, seed)
        return out

    if name == "damped-improvement":
        reps = 10**6 if reps is None else reps
        mu = np.zeros(3)
        mu[0] = 2.0
        dist = DistSpec.spherical_gaussian(mu, 1.0)
        n = 10
        plain = EstimatorSpec.sample_mean()
        damped = EstimatorSpec.mu_check_c(normalmean.default_c(n))
        out["results"] = [
            _risk_row(e, dist, n, reps, seed) for e in (plain, damped)
        ]
        out["paired"] = _paired_summary(damped, plain, dist, n, reps, seed)
        return out

    if name == "consistency":
        reps = 10**4 if reps is None else reps
        grid = [25, 50, 100, 200] if not n_grid else list(n_grid)
        dist = DistSpec.spherical_gaussian(np.array([1.0, 0.0]), 1.0)
        est = EstimatorSpec.mean_embed_shrink(KernelSpec.gaussian(1.0))
        rows = []
        points = []
        for n in grid:
            errs, alphas = mc_detail(est, dist, n, reps, seed)
            risk = summarize_errors(errs, reps, seed)
            a_star = oracle_alpha(dist, est, n)
            rows.append({
                "estimator": est.label(),
                "n": n,
                "d": dist.dim,
                "reps": reps,
                "mse": risk.mean_sq_error,
                "stderr": risk.std_error,
                "oracle_alpha": a_star,
                "median_alpha_gap": float(np.median(np.abs(alphas - a_star))),
            })
            points.append((n, risk.mean_sq_error))
        out["results"] = rows
        out["slope"] = rate_slope(points)
        return out

    # oracle dominance
    reps = 10**5 if reps is None else reps
    dist = DistSpec.spherical_gaussian(np.array([1.0, 0.0, 0.0]), 1.0)
    n = 10
    a_star = oracle_alpha(dist, EstimatorSpec.mu_check(), n)
    ests = (
        EstimatorSpec.sample_mean(),
        EstimatorSpec.fixed_alpha_mean(a_star),
        EstimatorSpec.mu_check(),
    )
    out["oracle_alpha"] = a_star
    out["results"] = [_risk_row(e, dist, n, reps, seed) for e in ests]
    return out
