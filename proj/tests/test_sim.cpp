#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "spoofkit/errors.hpp"
#include "spoofkit/rng.hpp"
#include "spoofkit/separation.hpp"
#include "spoofkit/sim.hpp"

using namespace spoofkit;

namespace {

LinearSystem base_system() {
    return LinearSystem{Mat::identity(2), Mat::identity(2), Mat::identity(2), Mat::scaled_identity(2, 0.5),
                        Mat::scaled_identity(2, 0.5)};
}

Scenario base_scenario(std::size_t steps, std::uint64_t seed) {
    Scenario scn;
    scn.sys = base_system();
    scn.x0 = Vec{0.0, 0.0};
    scn.u = Vec{1.0, 1.0};
    scn.clean_prior = {Vec{0.0, 0.0}, Mat::identity(2)};
    scn.spoofed_prior = {Vec{0.0, 0.0}, Mat::identity(2)};
    scn.attacker_guess = {Vec{0.0, 0.0}, Mat::identity(2)};
    scn.steps = steps;
    scn.seed = seed;
    return scn;
}

SpoofPlan ramp_plan(const LinearSystem& sys, std::vector<double>& d_out) {
    d_out.assign(20, 0.0);
    d_out[4] = 1.77;
    d_out[9] = 3.54;
    d_out[14] = 5.30;
    SpoofSpec spec;
    spec.horizon = 20;
    spec.d = d_out;
    spec.gamma.assign(20, 1.0);
    spec.norm_p = 1;
    spec.m0_bias = Vec{0.0, 0.0};
    const DesignInputs in = prepare_design(sys, Mat::identity(2), spec);
    return design_l1(in, spec);
}

} // namespace

TEST_CASE("exact measurements pin the filter to the state") {
    Scenario scn = base_scenario(8, 5);
    scn.sys.q = Mat::zeros(2, 2); // z = x, gain = I, filter locks on
    const RunRecord rec = simulate(scn, SimInputs{});
    REQUIRE(rec.steps.size() == 8);
    for (const StepRecord& s : rec.steps) {
        CHECK(std::fabs(s.m_clean[0] - s.x[0]) < 1e-12);
        CHECK(std::fabs(s.m_clean[1] - s.x[1]) < 1e-12);
        CHECK(s.sep_l1 == 0.0);
        CHECK(l1_norm(s.m_clean - s.m_spoof) < 1e-12);
        CHECK(s.eps[0] == 0.0);
    }
    CHECK(rec.energy_l1 == 0.0);
    CHECK(!rec.detected);
}

TEST_CASE("the separation series ignores the measurement seed under one schedule") {
    std::vector<double> d;
    const SpoofPlan plan = ramp_plan(base_system(), d);
    SimInputs in;
    in.plan = &plan;
    in.d_profile = d;

    Scenario a = base_scenario(20, 1);
    Scenario b = base_scenario(20, 2);
    const RunRecord ra = simulate(a, in);
    const RunRecord rb = simulate(b, in);
    REQUIRE(ra.steps.size() == 20);
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(ra.steps[t].sep_l1 == rb.steps[t].sep_l1); // bitwise: no B, no C terms
        CHECK(ra.steps[t].d_t == d[t]);
        CHECK(std::fabs(ra.steps[t].sep_l1 - l1_norm(ra.steps[t].m_clean - ra.steps[t].m_spoof)) < 1e-12);
    }
    CHECK(ra.steps[4].sep_l1 == doctest::Approx(1.77).epsilon(1e-6));
    CHECK(ra.steps[9].sep_l1 == doctest::Approx(3.54).epsilon(1e-6));
    CHECK(ra.steps[14].sep_l1 == doctest::Approx(5.30).epsilon(1e-6));
    CHECK(ra.energy_l1 == doctest::Approx(plan.objective).epsilon(1e-9));
}

TEST_CASE("recursion and direct filter difference agree under distinct schedules") {
    std::vector<double> d;
    const SpoofPlan plan = ramp_plan(base_system(), d);
    SimInputs in;
    in.plan = &plan;
    in.d_profile = d;

    Scenario scn = base_scenario(20, 77);
    scn.spoofed_prior = {Vec{1.0, 1.0}, Mat::scaled_identity(2, 1.5)};
    const RunRecord rec = simulate(scn, in);
    for (const StepRecord& s : rec.steps) {
        CHECK(std::fabs(s.sep_l1 - l1_norm(s.m_clean - s.m_spoof)) < 1e-9);
    }
}

TEST_CASE("one seed reproduces a run bitwise") {
    std::vector<double> d;
    const SpoofPlan plan = ramp_plan(base_system(), d);
    SimInputs in;
    in.plan = &plan;
    in.d_profile = d;
    Scenario scn = base_scenario(20, 31415);
    scn.clean_mean_spread = 0.5;
    scn.x0_from_clean = true;

    const RunRecord ra = simulate(scn, in);
    const RunRecord rb = simulate(scn, in);
    REQUIRE(ra.steps.size() == rb.steps.size());
    for (std::size_t t = 0; t < ra.steps.size(); ++t) {
        CHECK(ra.steps[t].x == rb.steps[t].x);
        CHECK(ra.steps[t].z == rb.steps[t].z);
        CHECK(ra.steps[t].m_clean == rb.steps[t].m_clean);
        CHECK(ra.steps[t].sep_l1 == rb.steps[t].sep_l1);
    }

    Scenario fixed = scn;
    fixed.x0_from_clean = false;
    const RunRecord rf = simulate(fixed, in);
    CHECK(rf.steps[0].x != ra.steps[0].x); // the initial state came from the prior draw
}

TEST_CASE("gaussian sampling matches the requested covariance") {
    const Mat cov = Mat::from_rows(2, 2, {0.5, 0.2, 0.2, 0.5});
    const Mat chol = chol_psd(cov);
    RandomStream rs(271828);
    double s00 = 0.0, s01 = 0.0, s11 = 0.0, m0 = 0.0, m1 = 0.0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec v = rs.gaussian(chol);
        m0 += v[0];
        m1 += v[1];
        s00 += v[0] * v[0];
        s01 += v[0] * v[1];
        s11 += v[1] * v[1];
    }
    const double nd = static_cast<double>(n);
    CHECK(std::fabs(m0 / nd) < 0.01);
    CHECK(std::fabs(m1 / nd) < 0.01);
    CHECK(std::fabs(s00 / nd - 0.5) < 0.015);
    CHECK(std::fabs(s01 / nd - 0.2) < 0.015);
    CHECK(std::fabs(s11 / nd - 0.5) < 0.015);
}

TEST_CASE("monte carlo aggregates are independent of the thread count") {
    std::vector<double> d;
    const SpoofPlan plan = ramp_plan(base_system(), d);
    SimInputs in;
    in.plan = &plan;
    in.d_profile = d;
    Scenario scn = base_scenario(20, 0);
    scn.x0_from_clean = true;
    scn.clean_mean_spread = 0.3;

    const Aggregate one = monte_carlo(scn, in, 16, 9001, 1);
    const Aggregate four = monte_carlo(scn, in, 16, 9001, 4);
    REQUIRE(one.trials.size() == 16);
    REQUIRE(four.trials.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(one.trials[i].energy_l1 == four.trials[i].energy_l1);
        CHECK(one.trials[i].sep == four.trials[i].sep);
    }
    CHECK(one.sep_mean == four.sep_mean);
    CHECK(one.energy_mean == four.energy_mean);

    // A single trial is exactly one simulate() on the derived seed.
    const Aggregate single = monte_carlo(scn, in, 1, 9001, 1);
    Scenario direct = scn;
    direct.seed = derive_seed(9001, 0);
    const RunRecord rec = simulate(direct, in);
    REQUIRE(single.first_run.steps.size() == rec.steps.size());
    for (std::size_t t = 0; t < rec.steps.size(); ++t) {
        CHECK(single.first_run.steps[t].sep_l1 == rec.steps[t].sep_l1);
        CHECK(single.first_run.steps[t].x == rec.steps[t].x);
    }
    CHECK(single.sep_min == single.sep_max); // one trial: envelope collapses
}

TEST_CASE("detector thresholds gate the alarm column") {
    Scenario scn = base_scenario(12, 8);
    scn.x0_from_clean = true;
    DetectorConfig quiet{DetectorForm::normalized_innovation, 1e9};
    SimInputs in;
    in.detector = &quiet;
    const RunRecord calm = simulate(scn, in);
    CHECK(!calm.detected);
    for (const StepRecord& s : calm.steps) {
        CHECK(!s.alarm);
        CHECK(s.g > 0.0);
    }

    DetectorConfig jumpy{DetectorForm::normalized_innovation, -1.0};
    in.detector = &jumpy;
    const RunRecord loud = simulate(scn, in);
    CHECK(loud.detected);
    for (const StepRecord& s : loud.steps) CHECK(s.alarm);
}

TEST_CASE("closed-loop runs hit the profile exactly when measurements are exact") {
    Scenario scn = base_scenario(5, 3);
    scn.sys.q = Mat::zeros(2, 2); // gain = I: separation keeps no history
    OnlineOptions opts;
    opts.window = 4;
    opts.d_profile = {0.0, 0.0, 1.0, 0.0, 2.0};
    opts.norm_p = 1;
    const RunRecord rec = simulate_online(scn, opts, nullptr);
    REQUIRE(rec.steps.size() == 5);
    CHECK(std::fabs(rec.steps[2].sep_l1 - 1.0) < 1e-9);
    CHECK(std::fabs(rec.steps[4].sep_l1 - 2.0) < 1e-9);
    CHECK(std::fabs(rec.energy_l1 - 3.0) < 1e-9);
    CHECK(rec.steps[0].d_t == 0.0);
    CHECK(rec.steps[2].d_t == 1.0);
}

TEST_CASE("paired energy comparison shares seeds across arms") {
    Scenario scn = base_scenario(6, 0);
    scn.x0_from_clean = true;
    OnlineOptions opts;
    opts.window = 5;
    opts.d_profile = {0.0, 0.0, 0.0, 0.0, 0.0, 2.0};
    opts.norm_p = 1;
    const EnergyComparison cmp = compare_energy(scn, opts, 3, 1234, 2);
    REQUIRE(cmp.offline_energy.size() == 3);
    REQUIRE(cmp.online_energy.size() == 3);
    // The offline plan is fixed, so its energy repeats across trials.
    CHECK(cmp.offline_energy[0] == cmp.offline_energy[1]);
    CHECK(cmp.offline_energy[1] == cmp.offline_energy[2]);
    CHECK(cmp.offline_mean == doctest::Approx(cmp.offline_energy[0]).epsilon(1e-12));
    double online_sum = 0.0;
    for (double e : cmp.online_energy) {
        CHECK(e >= 0.0);
        online_sum += e;
    }
    CHECK(cmp.online_mean == doctest::Approx(online_sum / 3.0).epsilon(1e-12));
    CHECK(!cmp.offline_plan.epsilons.empty());
}
