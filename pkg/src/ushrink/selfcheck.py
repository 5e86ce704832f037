"""Built-in oracle-equivalence suites, runnable without a test harness.

Three suites cross-validate independent computation routes on seeded random
data: the moment identities behind the covariance closed forms, the closed
forms against the exact enumeration engine, and the Gram-matrix shrinkage
formulas against the same engine for all kernel families.  The CLI ``check``
subcommand runs them and reports pass/fail counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import covmat
from .kernels import KernelSpec, gram, kernel_function
from .shrinkage import (
    covop_overlap_products,
    delta_degen,
    delta_general,
    mean_overlap_products,
    shrink_covop,
    shrink_covop_degen,
    shrink_mean,
)

IDENTITY_TOL = 1e-9
CLOSED_FORM_TOL = 1e-8
GRAM_TOL = 1e-9


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int
    worst: float

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "worst_relative_error": self.worst,
        }


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _datasets(rng, sizes, dims):
    for n in sizes:
        for d in dims:
            yield rng.uniform(-2.0, 2.0, size=(n, d))


def check_moment_identities(seed: int = 0) -> SuiteResult:
    """Double/triple/quadruple sums vs spectral-summary polynomials."""
    rng = np.random.default_rng(seed)
    passed = failed = 0
    worst = 0.0
    for data in _datasets(rng, range(2, 9), (1, 2, 3)):
        for lhs, rhs in covmat.moment_identity_check(data):
            err = _rel(lhs, rhs)
            worst = max(worst, err)
            if err <= IDENTITY_TOL:
                passed += 1
            else:
                failed += 1
    return SuiteResult("moment-identities", passed, failed, worst)


def check_closed_forms(seed: int = 1) -> SuiteResult:
    """Covariance closed forms vs the enumeration engine, linear kernel."""
    rng = np.random.default_rng(seed)
    linear = kernel_function(KernelSpec.linear())
    overlaps, disjoint = covop_overlap_products(linear)
    passed = failed = 0
    worst = 0.0
    for data in _datasets(rng, (4, 5, 6), (1, 3)):
        pairs = [
            (covmat.delta_general_closed(data),
             delta_general(overlaps, disjoint, data, 2)),
            (covmat.delta_degen_closed(data),
             delta_degen(overlaps[1], disjoint, data, 2)),
        ]
        for a, b in pairs:
            err = _rel(a, b)
            worst = max(worst, err)
            if err <= CLOSED_FORM_TOL:
                passed += 1
            else:
                failed += 1
    return SuiteResult("closed-forms-vs-enumeration", passed, failed, worst)


def check_gram_forms(seed: int = 2) -> SuiteResult:
    """Gram-matrix shrinkage formulas vs the enumeration engine."""
    rng = np.random.default_rng(seed)
    specs = (KernelSpec.linear(), KernelSpec.gaussian(1.0),
             KernelSpec.exponential(1.0))
    passed = failed = 0
    worst = 0.0
    for data in _datasets(rng, (4, 5, 6), (2,)):
        for spec in specs:
            fn = kernel_function(spec)
            g = gram(spec, data)
            mean_overlaps, mean_disjoint = mean_overlap_products(fn)
            cov_overlaps, cov_disjoint = covop_overlap_products(fn)
            _, mean_report = shrink_mean(g)
            pairs = [
                (mean_report.delta_hat,
                 delta_general(mean_overlaps, mean_disjoint, data, 1)),
                (shrink_covop(g).delta_hat,
                 delta_general(cov_overlaps, cov_disjoint, data, 2)),
                (shrink_covop_degen(g).delta_hat,
                 delta_degen(cov_overlaps[1], cov_disjoint, data, 2)),
            ]
            for a, b in pairs:
                err = _rel(a, b)
                worst = max(worst, err)
                if err <= GRAM_TOL:
                    passed += 1
                else:
                    failed += 1
    return SuiteResult("gram-forms-vs-enumeration", passed, failed, worst)


def run_checks(seed: int = 0) -> list[SuiteResult]:
    """Run all suites with seeds derived from ``seed``."""
    return [
        check_moment_identities(seed),
        check_closed_forms(seed + 1),
        check_gram_forms(seed + 2),
    ]
