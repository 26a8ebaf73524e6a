#include <cmath>
#include <vector>

#include "doctest.h"
#include "spoofkit/chi2.hpp"
#include "spoofkit/detector_experiments.hpp"
#include "spoofkit/errors.hpp"
#include "spoofkit/stats.hpp"

using namespace spoofkit;

namespace {

LinearSystem base_system() {
    return LinearSystem{Mat::identity(2), Mat::identity(2), Mat::identity(2), Mat::scaled_identity(2, 0.5),
                        Mat::scaled_identity(2, 0.5)};
}

} // namespace

TEST_CASE("a residual of zero scores zero in both forms") {
    const LinearSystem sys = base_system();
    const GaussianBelief prior{Vec{1.0, -2.0}, Mat::scaled_identity(2, 1.5)};
    const GaussianBelief post{Vec{1.0, -2.0}, Mat::scaled_identity(2, 0.4)};
    const Vec z = sys.h * post.mean;
    CHECK(detector_statistic(DetectorForm::paper_literal, sys, prior, post, z) == 0.0);
    const Vec zp = sys.h * prior.mean;
    CHECK(detector_statistic(DetectorForm::normalized_innovation, sys, prior, post, zp) == 0.0);
}

TEST_CASE("the covariance-weighted form scales with the posterior covariance") {
    const LinearSystem sys = base_system();
    const GaussianBelief prior{Vec{0.0, 0.0}, Mat::identity(2)};
    const GaussianBelief post{Vec{0.0, 0.0}, Mat::scaled_identity(2, 0.309017)};
    // Unit residual in each component: g = 2 * 0.309017.
    const double g = detector_statistic(DetectorForm::paper_literal, sys, prior, post, Vec{1.0, 1.0});
    CHECK(g == doctest::Approx(0.618034).epsilon(1e-9));

    LinearSystem wide = sys;
    wide.h = Mat::from_rows(1, 2, {1.0, 0.0});
    wide.q = Mat::scaled_identity(1, 0.5);
    CHECK_THROWS_AS(detector_statistic(DetectorForm::paper_literal, wide, prior, post, Vec{1.0}), DimensionError);
}

TEST_CASE("the normalized form whitens by the innovation covariance") {
    const LinearSystem sys = base_system();
    const GaussianBelief prior{Vec{0.0, 0.0}, Mat::scaled_identity(2, 1.5)};
    const GaussianBelief post{Vec{0.0, 0.0}, Mat::identity(2)};
    // S = 1.5 I + 0.5 I = 2 I, nu = (1, 0): g = 1/2.
    const double g = detector_statistic(DetectorForm::normalized_innovation, sys, prior, post, Vec{1.0, 0.0});
    CHECK(g == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(detector_statistic(DetectorForm::normalized_innovation, sys, prior, post, Vec{1.0, 0.0, 0.0}),
                    DimensionError);
}

TEST_CASE("two-degree chi-squared cdf closed form") {
    CHECK(chi2_cdf_2dof(0.0) == 0.0);
    CHECK(chi2_cdf_2dof(-3.0) == 0.0);
    CHECK(chi2_cdf_2dof(2.0 * std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi2_cdf_2dof(-2.0 * std::log(0.1)) == doctest::Approx(0.9).epsilon(1e-12));
    // The threshold whose upper tail is the calibration target.
    const double tau = -2.0 * std::log(0.11054);
    CHECK(1.0 - chi2_cdf_2dof(tau) == doctest::Approx(0.11054).epsilon(1e-12));
}

TEST_CASE("binomial upper tail handles extreme and moderate counts") {
    const double extreme = binom_pvalue(267, 1000, 0.11054);
    CHECK(std::fabs(extreme - 9.2133e-43) / 9.2133e-43 < 0.01);
    const double moderate = binom_pvalue(118, 1000, 0.11054);
    CHECK(std::fabs(moderate - 0.2393) / 0.2393 < 0.01);

    CHECK(binom_pvalue(0, 1000, 0.11054) == 1.0);
    CHECK(binom_pvalue(10, 10, 0.3) == doctest::Approx(std::pow(0.3, 10)).epsilon(1e-9));

    for (std::uint64_t x = 0; x < 30; ++x) {
        CHECK(binom_pvalue(x, 30, 0.4) > binom_pvalue(x + 1, 30, 0.4));
    }

    CHECK_THROWS_AS(binom_pvalue(11, 10, 0.3), DimensionError);
    CHECK_THROWS_AS(binom_pvalue(1, 10, 0.0), DimensionError);
    CHECK_THROWS_AS(binom_pvalue(1, 10, 1.0), DimensionError);
}

TEST_CASE("binomial upper tail agrees with direct summation") {
    const std::uint64_t n = 50;
    const double p0 = 0.2;
    const std::uint64_t x = 17;
    double direct = 0.0;
    for (std::uint64_t k = x; k <= n; ++k) {
        const double lc = std::lgamma(51.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0);
        direct += std::exp(lc + static_cast<double>(k) * std::log(p0) +
                           static_cast<double>(n - k) * std::log1p(-p0));
    }
    CHECK(binom_pvalue(x, n, p0) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("ks distance of exact quantiles is half a step") {
    const std::size_t n = 100;
    std::vector<double> samples;
    samples.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(n);
        samples.push_back(-2.0 * std::log1p(-p));
    }
    const double d = ks_distance_chi2_2dof(samples);
    CHECK(d == doctest::Approx(0.5 / static_cast<double>(n)).epsilon(1e-12));
    CHECK(d < 1.0 / static_cast<double>(n));
    CHECK_THROWS_AS(ks_distance_chi2_2dof({}), DimensionError);
}

TEST_CASE("bootstrap quantiles of the mean are deterministic and ordered") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 10.0};
    CHECK(mean(xs) == doctest::Approx(4.0).epsilon(1e-12));
    const double lo = bootstrap_mean_quantile(xs, 0.05, 2000, 99);
    const double hi = bootstrap_mean_quantile(xs, 0.95, 2000, 99);
    CHECK(lo <= hi);
    CHECK(lo == bootstrap_mean_quantile(xs, 0.05, 2000, 99));
    const std::vector<double> flat(8, 2.5);
    CHECK(bootstrap_mean_quantile(flat, 0.5, 100, 7) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK_THROWS_AS(bootstrap_mean_quantile({}, 0.5, 10, 1), DimensionError);
}

TEST_CASE("threshold calibration picks the smallest grid point under the target") {
    CalibrationParams params;
    params.scenario.sys = base_system();
    params.scenario.x0 = Vec{0.0, 0.0};
    params.scenario.x0_from_clean = true;
    params.scenario.u = Vec{1.0, 1.0};
    params.scenario.clean_prior = {Vec{0.0, 0.0}, Mat::identity(2)};
    params.scenario.spoofed_prior = {Vec{0.0, 0.0}, Mat::identity(2)};
    params.scenario.attacker_guess = {Vec{0.0, 0.0}, Mat::identity(2)};
    params.scenario.steps = 10;
    params.form = DetectorForm::normalized_innovation;
    params.metric = AlarmMetric::per_step;
    params.target = 0.11054;
    params.n_sims = 3;
    params.trials_per_sim = 50;
    params.grid_min = 0.0;
    params.grid_max = 12.0;
    params.grid_step = 0.5;

    const CalibrationResult res = calibrate_threshold(params, 424242, 2);
    CHECK(res.achieved_rate <= params.target);
    // A consistent filter puts the per-step rate near the chi-squared tail,
    // so the chosen threshold lands near -2 ln(target) = 4.4 on this grid.
    CHECK(res.threshold >= 3.0);
    CHECK(res.threshold <= 6.5);
    CHECK(!res.curve.empty());
    CHECK(!res.other_curve.empty());
    for (std::size_t i = 0; i < res.curve.size(); ++i) {
        const CalibrationPoint& p = res.curve[i];
        CHECK(p.rate_min <= p.rate_mean + 1e-12);
        CHECK(p.rate_mean <= p.rate_max + 1e-12);
        if (i > 0) CHECK(p.rate_mean <= res.curve[i - 1].rate_mean + 1e-12);
        if (p.threshold < res.threshold - 1e-9) CHECK(p.rate_mean > params.target);
    }

    const CalibrationResult again = calibrate_threshold(params, 424242, 1);
    CHECK(again.threshold == res.threshold);
    CHECK(again.achieved_rate == res.achieved_rate);
}
