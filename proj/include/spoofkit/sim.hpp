#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spoofkit/chi2.hpp"
#include "spoofkit/kalman.hpp"
#include "spoofkit/linalg.hpp"
#include "spoofkit/online.hpp"
#include "spoofkit/spoof_design.hpp"

namespace spoofkit {

// One seeded world: true dynamics, the observer's filter under spoofing, and
// the counterfactual clean filter.
//
// clean_mean_spread > 0 draws the clean filter's initial mean per trial from
// N(clean_prior.mean, spread * I); the spoofed filter's initialization is
// exact. x0_from_clean replaces the fixed x0 with a draw from
// N(sampled clean mean, clean_prior.cov), which makes the clean filter
// consistent: its innovations are then zero-mean with exactly the predicted
// covariance. Draw order per trial: the initial-mean perturbation (when the
// spread is positive), then the initial state (when x0_from_clean is set),
// then per step the process noise followed by the measurement noise, so a
// scenario's seed fully determines the run.
struct Scenario {
    LinearSystem sys;
    Vec x0;
    bool x0_from_clean = false;
    Vec u;
    GaussianBelief clean_prior;
    double clean_mean_spread = 0.0;
    GaussianBelief spoofed_prior;
    GaussianBelief attacker_guess; // clean-filter model used by online planning
    std::size_t steps = 0;
    std::uint64_t seed = 0;
};

struct StepRecord {
    std::size_t t = 0;
    Vec x;        // true state
    Vec z;        // clean measurement
    Vec eps;      // spoofing input (z_tilde = z + eps)
    Vec m_clean;  // clean posterior mean
    Vec m_spoof;  // spoofed posterior mean
    double sep_l1 = 0.0;
    double d_t = 0.0;
    double g = 0.0;
    bool alarm = false;
};

struct RunRecord {
    std::vector<StepRecord> steps;
    double energy_l1 = 0.0;
    bool detected = false;
};

struct SimInputs {
    const SpoofPlan* plan = nullptr;          // null = unattacked run
    const DetectorConfig* detector = nullptr; // null = no residual test
    std::vector<double> d_profile;            // desired separations, for the record only
};

// Runs one seeded trial. The separation column comes from the difference
// recursion diff_t = A_t diff_{t-1} + B_t + C_t, with B dropped when both
// filters share one gain schedule; in that case the series involves no
// measurements at all, so it is bit-identical across seeds.
RunRecord simulate(const Scenario& scn, const SimInputs& in);

// Closed-loop variant: each step re-plans over a lookahead window of
// `window + 1` steps against d_profile (zero-padded past its end) and applies
// the first input. The observer's filter and the attacker's replica coincide.
struct OnlineOptions {
    std::size_t window = 0;
    std::vector<double> d_profile;
    int norm_p = 1;
};

RunRecord simulate_online(const Scenario& scn, const OnlineOptions& opts, const DetectorConfig* detector = nullptr);

struct TrialSummary {
    double energy_l1 = 0.0;
    bool detected = false;
    std::vector<double> sep; // per step
};

struct Aggregate {
    std::size_t n_trials = 0;
    std::vector<double> sep_mean;
    std::vector<double> sep_min;
    std::vector<double> sep_max;
    double energy_mean = 0.0;
    std::size_t detected_count = 0;
    std::vector<TrialSummary> trials;
    RunRecord first_run;
};

// n_trials seeded runs with per-trial seeds derive_seed(master_seed, i),
// reduced in trial order so the aggregate does not depend on `threads`.
Aggregate monte_carlo(const Scenario& scn, const SimInputs& in, std::size_t n_trials, std::uint64_t master_seed,
                      unsigned threads = 1);

Aggregate monte_carlo_online(const Scenario& scn, const OnlineOptions& opts, const DetectorConfig* detector,
                             std::size_t n_trials, std::uint64_t master_seed, unsigned threads = 1);

// Paired offline/online energies over shared per-trial seeds. The offline
// plan is designed once from the attacker's expected initial bias; the online
// arm re-plans every step.
struct EnergyComparison {
    std::vector<double> offline_energy;
    std::vector<double> online_energy;
    double offline_mean = 0.0;
    double online_mean = 0.0;
    SpoofPlan offline_plan;
};

EnergyComparison compare_energy(const Scenario& scn, const OnlineOptions& opts, std::size_t n_trials,
                                std::uint64_t master_seed, unsigned threads = 1);

} // namespace spoofkit
