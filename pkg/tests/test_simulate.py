import math

import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from ushrink import (
    CapabilityError,
    DistSpec,
    EstimatorSpec,
    KernelSpec,
    ParameterError,
    gaussian_embed_norm_sq,
    gaussian_kernel_location_moment,
    mc_alphas,
    mc_errors,
    mc_risk,
    oracle_alpha,
    rate_slope,
    run_experiment,
    sample,
)
from ushrink.simulate import mc_detail


def e1(d):
    v = np.zeros(d)
    v[0] = 1.0
    return v


class TestSample:
    def test_degenerate_spread(self):
        dist = DistSpec.spherical_gaussian(np.array([1.0, -2.0]), 1e-12)
        data = sample(dist, 50, 3)
        assert np.abs(data - dist.mu).max() < 1e-10

    def test_deterministic(self):
        dist = DistSpec.uniform_box(np.zeros(3), np.ones(3))
        a = sample(dist, 20, 99)
        b = sample(dist, 20, 99)
        assert np.array_equal(a, b)

    def test_uniform_mean_concentrates(self):
        dist = DistSpec.uniform_box(np.zeros(2), np.ones(2))
        data = sample(dist, 10**4, 7)
        assert np.abs(data.mean(axis=0) - 0.5).max() < 0.02

    def test_diag_gaussian_shape(self):
        dist = DistSpec.diag_gaussian([0.0, 1.0], [1.0, 2.0])
        assert sample(dist, 5, 0).shape == (5, 2)

    def test_validation(self):
        with pytest.raises(ParameterError):
            DistSpec.spherical_gaussian([0.0], 0.0)
        with pytest.raises(ParameterError):
            DistSpec.uniform_box([0.0, 1.0], [1.0, 0.5])
        with pytest.raises(ParameterError):
            sample(DistSpec.spherical_gaussian([0.0], 1.0), 0, 1)
        with pytest.raises(ParameterError):
            sample(DistSpec.spherical_gaussian([0.0], 1.0), 3, -1)


class TestKernelMoments:
    # closed-form Gaussian integrals behind the embedding risk, checked
    # against adaptive quadrature at d = 1

    def test_location_moment_vs_quadrature(self):
        b, sigma, mu = 1.0, 0.9, 0.3

        def dens(y):
            return math.exp(-((y - mu) ** 2) / (2 * sigma**2)) / math.sqrt(
                2 * math.pi * sigma**2
            )

        for x in (-1.0, 0.0, 0.7, 2.5):
            ref, _ = quad(lambda y: math.exp(-((x - y) ** 2) / b) * dens(y), -30, 30)
            got = gaussian_kernel_location_moment(
                np.array([x]), np.array([mu]), sigma, b
            )
            assert got == pytest.approx(ref, rel=1e-10)

    def test_norm_sq_vs_quadrature(self):
        b, sigma, mu = 1.3, 0.8, 0.4

        def dens(y):
            return math.exp(-((y - mu) ** 2) / (2 * sigma**2)) / math.sqrt(
                2 * math.pi * sigma**2
            )

        ref, _ = dblquad(
            lambda y, x: math.exp(-((x - y) ** 2) / b) * dens(x) * dens(y),
            -20, 20, -20, 20,
        )
        assert gaussian_embed_norm_sq(1, sigma, b) == pytest.approx(ref, rel=1e-8)

    def test_norm_sq_independent_of_mean(self):
        # the estimand's squared norm depends only on sigma, b, d
        assert gaussian_embed_norm_sq(3, 1.0, 1.0) == pytest.approx(0.2**1.5)

    def test_location_moment_batched(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0]])
        vals = gaussian_kernel_location_moment(pts, np.zeros(2), 1.0, 1.0)
        assert vals.shape == (2,)
        assert vals[0] > vals[1]


class TestMcRisk:
    def test_sample_mean_matches_analytic(self):
        # E||Xbar - mu||^2 = d sigma^2 / n at three configurations
        for d, n, sigma, seed in [(3, 10, 1.0, 101), (10, 5, 1.0, 202),
                                  (5, 20, 2.0, 303)]:
            dist = DistSpec.spherical_gaussian(e1(d), sigma)
            plain = mc_risk(EstimatorSpec.sample_mean(), dist, n, 10**5, seed)
            target = d * sigma**2 / n
            assert abs(plain.mean_sq_error - target) < 4 * plain.std_error

            # fixed-oracle dominance at the same configuration
            a_star = oracle_alpha(dist, EstimatorSpec.mu_check(), n)
            assert a_star >= 0.1
            fixed = mc_risk(EstimatorSpec.fixed_alpha_mean(a_star), dist, n,
                            10**5, seed)
            combined = math.hypot(fixed.std_error, plain.std_error)
            assert fixed.mean_sq_error <= plain.mean_sq_error - 2 * combined

    def test_deterministic(self):
        dist = DistSpec.spherical_gaussian(e1(3), 1.0)
        a = mc_risk(EstimatorSpec.mu_check(), dist, 8, 200, 5)
        b = mc_risk(EstimatorSpec.mu_check(), dist, 8, 200, 5)
        assert a == b

    def test_degenerate_dist_zero_risk(self):
        dist = DistSpec.spherical_gaussian(np.zeros(3), 1e-12)
        for est in (EstimatorSpec.sample_mean(), EstimatorSpec.mu_check()):
            r = mc_risk(est, dist, 5, 100, 1)
            assert r.mean_sq_error <= 1e-20

    def test_cov_mat_plain_sanity(self):
        dist = DistSpec.spherical_gaussian(np.zeros(2), 1.0)
        r = mc_risk(EstimatorSpec.cov_mat_plain(), dist, 20, 10**5, 9)
        assert r.mean_sq_error > 0
        assert r.std_error < r.mean_sq_error

    def test_cov_mat_shrink_improves_near_identity(self):
        dist = DistSpec.spherical_gaussian(np.zeros(3), 1.0)
        plain = mc_risk(EstimatorSpec.cov_mat_plain(), dist, 10, 2000, 17)
        shrunk = mc_risk(EstimatorSpec.cov_mat_shrink(tau=1.0), dist, 10, 2000, 17)
        assert shrunk.mean_sq_error < plain.mean_sq_error

    def test_reps_floor(self):
        dist = DistSpec.spherical_gaussian(np.zeros(2), 1.0)
        with pytest.raises(ParameterError, match="reps"):
            mc_risk(EstimatorSpec.sample_mean(), dist, 5, 99, 0)

    def test_unsupported_combinations(self):
        uniform = DistSpec.uniform_box(np.zeros(2), np.ones(2))
        gauss_embed = EstimatorSpec.mean_embed_shrink(KernelSpec.gaussian(1.0))
        with pytest.raises(CapabilityError):
            mc_risk(gauss_embed, uniform, 10, 100, 0)
        exp_embed = EstimatorSpec.mean_embed_shrink(KernelSpec.exponential(1.0))
        with pytest.raises(CapabilityError):
            mc_risk(exp_embed, DistSpec.spherical_gaussian(np.zeros(2), 1.0),
                    10, 100, 0)

    def test_linear_embed_equals_mu_check(self):
        dist = DistSpec.spherical_gaussian(e1(3), 1.0)
        emb = mc_errors(EstimatorSpec.mean_embed_shrink(KernelSpec.linear()),
                        dist, 10, 100, 3)
        mc = mc_errors(EstimatorSpec.mu_check(), dist, 10, 100, 3)
        assert np.array_equal(emb, mc)

    def test_paired_replications_share_data(self):
        # replication r is seeded with seed + r for every estimator
        dist = DistSpec.spherical_gaussian(e1(2), 1.0)
        errs = mc_errors(EstimatorSpec.sample_mean(), dist, 6, 100, 40)

        def err(r):
            diff = sample(dist, 6, 40 + r).mean(axis=0) - dist.mean
            return float(diff @ diff)

        assert np.array_equal(errs, np.array([err(r) for r in range(100)]))


class TestMcAlphas:
    def test_values_in_unit_interval(self):
        dist = DistSpec.spherical_gaussian(e1(2), 1.0)
        alphas = mc_alphas(EstimatorSpec.mu_check(), dist, 10, 200, 8)
        assert np.all((alphas >= 0) & (alphas <= 1))

    def test_rejected_for_plain_estimators(self):
        dist = DistSpec.spherical_gaussian(e1(2), 1.0)
        with pytest.raises(CapabilityError):
            mc_alphas(EstimatorSpec.sample_mean(), dist, 10, 100, 0)

    def test_detail_is_one_pass(self):
        dist = DistSpec.spherical_gaussian(e1(2), 1.0)
        errs, alphas = mc_detail(EstimatorSpec.mu_check(), dist, 10, 150, 2)
        assert errs.shape == alphas.shape == (150,)


class TestOracleAlpha:
    def test_linear_mean_example(self):
        dist = DistSpec.spherical_gaussian(e1(3), 1.0)
        a = oracle_alpha(dist, EstimatorSpec.mu_check(), 10)
        assert a == pytest.approx(0.3 / 1.3, rel=1e-12)

    def test_zero_mean_full_shrinkage(self):
        dist = DistSpec.spherical_gaussian(np.zeros(4), 1.0)
        assert oracle_alpha(dist, EstimatorSpec.mu_check(), 5) == 1.0

    def test_vanishing_noise(self):
        dist = DistSpec.spherical_gaussian(e1(3), 1e-6)
        assert oracle_alpha(dist, EstimatorSpec.mu_check(), 5) < 1e-11

    def test_gaussian_embed(self):
        dist = DistSpec.spherical_gaussian(e1(2), 1.0)
        est = EstimatorSpec.mean_embed_shrink(KernelSpec.gaussian(1.0))
        norm_c = 0.2
        delta = (1 - norm_c) / 25
        assert oracle_alpha(dist, est, 25) == pytest.approx(
            delta / (delta + norm_c), rel=1e-12
        )

    def test_capability_error(self):
        dist = DistSpec.uniform_box(np.zeros(2), np.ones(2))
        est = EstimatorSpec.mean_embed_shrink(KernelSpec.gaussian(1.0))
        with pytest.raises(CapabilityError):
            oracle_alpha(dist, est, 10)


class TestRateSlope:
    def test_exact_inverse_law(self):
        assert rate_slope([(10, 1.0), (100, 0.1), (1000, 0.01)]) == pytest.approx(-1.0)

    def test_flat(self):
        assert rate_slope([(10, 0.7), (100, 0.7), (1000, 0.7)]) == pytest.approx(0.0, abs=1e-12)

    def test_inverse_square_law(self):
        assert rate_slope([(10, 1.0), (100, 0.01), (1000, 1e-4)]) == pytest.approx(-2.0)

    def test_too_few_points(self):
        with pytest.raises(ParameterError):
            rate_slope([(10, 1.0), (100, 0.1)])

    def test_nonpositive_rejected(self):
        with pytest.raises(ParameterError):
            rate_slope([(10, 1.0), (100, 0.0), (1000, 0.01)])


class TestExperiments:
    def test_mean_improvement_small(self):
        out = run_experiment("mean-improvement", reps=200, seed=1)
        assert {row["estimator"] for row in out["results"]} == {
            "sample_mean", "mu_check"
        }
        assert out["paired"]["mean"] < 0  # shrunk minus plain

    def test_consistency_small(self):
        out = run_experiment("consistency", reps=150, seed=2, n_grid=[8, 12, 16])
        assert len(out["results"]) == 3
        assert "slope" in out
        assert all("median_alpha_gap" in row for row in out["results"])

    def test_unknown_experiment(self):
        with pytest.raises(ParameterError):
            run_experiment("nope")
