#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "spoofkit/errors.hpp"
#include "spoofkit/kalman.hpp"

using namespace spoofkit;

namespace {

// Base 2D model used throughout: identity dynamics, both noises 0.5 I.
LinearSystem base_system() {
    return LinearSystem{Mat::identity(2), Mat::identity(2), Mat::identity(2), Mat::scaled_identity(2, 0.5),
                        Mat::scaled_identity(2, 0.5)};
}

Mat random_spd(std::mt19937_64& rng, std::size_t n, double floor) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(n, n);
    for (double& x : a.e) x = u(rng);
    return a * transpose(a) + Mat::scaled_identity(n, floor);
}

double trace(const Mat& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, i);
    return s;
}

} // namespace

TEST_CASE("base model gains match the scalar recursion oracle") {
    const LinearSystem sys = base_system();
    const GainSchedule sched = build_gain_schedule(sys, Mat::identity(2), 20);

    // Independent oracle: per axis the recursion reduces to scalars.
    double post = 1.0;
    for (std::size_t t = 0; t < 20; ++t) {
        const double prior = post + 0.5;
        const double k = prior / (prior + 0.5);
        post = (1.0 - k) * prior;
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(sched.gains[t].at(i, i) == doctest::Approx(k).epsilon(1e-12));
            CHECK(sched.prior_covs[t].at(i, i) == doctest::Approx(prior).epsilon(1e-12));
            CHECK(sched.post_covs[t].at(i, i) == doctest::Approx(post).epsilon(1e-12));
            CHECK(sched.innov_covs[t].at(i, i) == doctest::Approx(prior + 0.5).epsilon(1e-12));
        }
        // Decoupled axes: off-diagonals stay exactly zero.
        CHECK(sched.gains[t].at(0, 1) == 0.0);
        CHECK(sched.gains[t].at(1, 0) == 0.0);
    }
}

TEST_CASE("base model frozen gain values") {
    const GainSchedule sched = build_gain_schedule(base_system(), Mat::identity(2), 50);
    CHECK(sched.gains[0].at(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(sched.post_covs[0].at(0, 0) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(sched.gains[1].at(0, 0) == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
    CHECK(sched.gains[1].at(0, 0) == doctest::Approx(0.636364).epsilon(1e-6));
    CHECK(sched.gains[2].at(0, 0) == doctest::Approx(0.62069).epsilon(1e-5));
    CHECK(sched.gains[4].at(0, 0) == doctest::Approx(123.0 / 199.0).epsilon(1e-12));
    CHECK(sched.gains[4].at(0, 0) == doctest::Approx(0.618090).epsilon(1e-5));

    // Fixed point: K -> (sqrt(5) - 1) / 2, posterior variance -> K / 2.
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    CHECK(sched.gains[49].at(0, 0) == doctest::Approx(golden).epsilon(1e-9));
    CHECK(sched.post_covs[49].at(0, 0) == doctest::Approx(0.5 * golden).epsilon(1e-9));
    CHECK(sched.gains[49].at(0, 0) == doctest::Approx(0.618034).epsilon(1e-6));
    CHECK(sched.post_covs[49].at(0, 0) == doctest::Approx(0.309017).epsilon(1e-6));
}

TEST_CASE("scalar system reaches the same fixed point") {
    const LinearSystem sys{Mat::scaled_identity(1, 1.0), Mat::scaled_identity(1, 1.0), Mat::scaled_identity(1, 1.0),
                           Mat::scaled_identity(1, 0.5), Mat::scaled_identity(1, 0.5)};
    const GainSchedule sched = build_gain_schedule(sys, Mat::identity(1), 50);
    CHECK(sched.gains[49].at(0, 0) == doctest::Approx(0.618033988749895).epsilon(1e-9));
    CHECK(sched.post_covs[49].at(0, 0) == doctest::Approx(0.309016994374947).epsilon(1e-9));
}

TEST_CASE("schedule construction is deterministic") {
    const LinearSystem sys = base_system();
    const GainSchedule a = build_gain_schedule(sys, Mat::identity(2), 30);
    const GainSchedule b = build_gain_schedule(sys, Mat::identity(2), 30);
    CHECK(schedules_equal(a, b));
    for (std::size_t t = 0; t < 30; ++t) {
        CHECK(a.gains[t] == b.gains[t]);
        CHECK(a.innov_covs[t] == b.innov_covs[t]);
    }
    CHECK(!schedules_equal(a, build_gain_schedule(sys, Mat::scaled_identity(2, 1.5), 30)));
}

TEST_CASE("posterior covariances stay symmetric PSD with non-increasing trace") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        Mat f(2, 2);
        for (double& x : f.e) x = 0.6 * u(rng);
        f = f + Mat::scaled_identity(2, 0.5);
        Mat h(2, 2);
        for (double& x : h.e) x = u(rng);
        h = h + Mat::scaled_identity(2, 1.0);
        const LinearSystem sys{f, Mat::identity(2), h, random_spd(rng, 2, 0.2), random_spd(rng, 2, 0.2)};
        const GainSchedule sched = build_gain_schedule(sys, random_spd(rng, 2, 0.3), 15);
        for (std::size_t t = 0; t < 15; ++t) {
            CHECK(sched.post_covs[t].at(0, 1) == sched.post_covs[t].at(1, 0));
            CHECK(min_eig_sym2(sched.post_covs[t]) >= -1e-10);
            CHECK(trace(sched.post_covs[t]) <= trace(sched.prior_covs[t]) + 1e-12);
        }
    }
}

TEST_CASE("predict and update match the frozen hand computation") {
    const LinearSystem sys = base_system();
    const GaussianBelief init{Vec{0.0, 0.0}, Mat::identity(2)};
    const GaussianBelief prior = predict(sys, init, Vec{1.0, 1.0});
    CHECK(prior.mean == Vec{1.0, 1.0});
    CHECK(prior.cov.at(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(prior.cov.at(0, 1) == 0.0);

    const GaussianBelief post = update(sys, prior, Vec{2.0, 2.0}, Mat::scaled_identity(2, 0.75));
    CHECK(post.mean[0] == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(post.mean[1] == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(post.cov.at(0, 0) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("gain_from_prior_cov agrees with the schedule") {
    const LinearSystem sys = base_system();
    const GainSchedule sched = build_gain_schedule(sys, Mat::identity(2), 5);
    for (std::size_t t = 0; t < 5; ++t) {
        const Mat k = gain_from_prior_cov(sys, sched.prior_covs[t]);
        for (std::size_t i = 0; i < 4; ++i) CHECK(k.e[i] == doctest::Approx(sched.gains[t].e[i]).epsilon(1e-12));
    }
}

TEST_CASE("run_filter covariances reproduce the schedule for any measurements") {
    const LinearSystem sys = base_system();
    const GainSchedule sched = build_gain_schedule(sys, Mat::identity(2), 8);
    std::mt19937_64 rng(29);
    std::normal_distribution<double> n01;
    std::vector<Vec> controls(8, Vec{1.0, 1.0});
    std::vector<Vec> zs;
    for (int t = 0; t < 8; ++t) zs.push_back(Vec{n01(rng), n01(rng)});
    const auto beliefs = run_filter(sys, {Vec{0.0, 0.0}, Mat::identity(2)}, controls, zs);
    REQUIRE(beliefs.size() == 8);
    for (std::size_t t = 0; t < 8; ++t)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(beliefs[t].cov.e[i] == doctest::Approx(sched.post_covs[t].e[i]).epsilon(1e-12));
}

TEST_CASE("shape and solvability errors") {
    LinearSystem bad = base_system();
    bad.g = Mat(3, 2);
    CHECK_THROWS_AS(bad.validate(), DimensionError);
    bad = base_system();
    bad.q = Mat::identity(3);
    CHECK_THROWS_AS(bad.validate(), DimensionError);
    bad = base_system();
    bad.f.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(), DimensionError);

    LinearSystem deaf = base_system();
    deaf.h = Mat::zeros(2, 2);
    deaf.q = Mat::zeros(2, 2);
    CHECK_THROWS_AS(build_gain_schedule(deaf, Mat::identity(2), 3), SingularMatrixError);

    const LinearSystem sys = base_system();
    CHECK_THROWS_AS(build_gain_schedule(sys, Mat::identity(3), 3), DimensionError);
    CHECK_THROWS_AS(update(sys, {Vec{0.0, 0.0}, Mat::identity(2)}, Vec{1.0}, Mat::identity(2)), DimensionError);
    CHECK_THROWS_AS(run_filter(sys, {Vec{0.0, 0.0}, Mat::identity(2)}, std::vector<Vec>(2, Vec{0.0, 0.0}),
                               std::vector<Vec>(3, Vec{0.0, 0.0})),
                    DimensionError);
}
