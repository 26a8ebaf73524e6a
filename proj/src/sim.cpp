#include "spoofkit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "spoofkit/errors.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {

namespace {

// Shared per-trial loop. `plan_fn(t, state)` supplies the spoofing input for
// step t before the measurement is drawn; offline runs ignore the state and
// skip the attacker bookkeeping via track_attacker = false.
template <typename PlanFn>
RunRecord run_trial(const Scenario& scn, const DetectorConfig* detector, const std::vector<double>& d_profile,
                    const GainSchedule& clean_sched, const GainSchedule& spoof_sched, bool same_sched,
                    bool track_attacker, PlanFn&& plan_fn) {
    const LinearSystem& sys = scn.sys;
    RandomStream rs(scn.seed);
    const Mat lw = chol_psd(sys.r);
    const Mat lv = chol_psd(sys.q);

    GaussianBelief clean = scn.clean_prior;
    if (scn.clean_mean_spread > 0.0) {
        const Mat l0 = Mat::scaled_identity(sys.state_dim(), std::sqrt(scn.clean_mean_spread));
        clean.mean = clean.mean + rs.gaussian(l0);
    }
    GaussianBelief spoof = scn.spoofed_prior;
    // The attacker's shadow starts from its guess, not the realized clean
    // initialization, which it cannot observe.
    OnlineState attacker{spoof, scn.attacker_guess, 0};

    Vec diff = clean.mean - spoof.mean;
    Vec x = scn.x0_from_clean ? clean.mean + rs.gaussian(chol_psd(scn.clean_prior.cov)) : scn.x0;

    RunRecord rec;
    rec.steps.reserve(scn.steps);
    for (std::size_t t = 1; t <= scn.steps; ++t) {
        const Vec eps = plan_fn(t, attacker);
        const Vec w = rs.gaussian(lw);
        const Vec v = rs.gaussian(lv);
        x = sys.f * x + sys.g * scn.u + w;
        const Vec z = sys.h * x + v;
        const Vec ztil = z + eps;

        const Vec prev_clean_mean = clean.mean;
        const GaussianBelief clean_prior = predict(sys, clean, scn.u);
        clean = update(sys, clean_prior, z, clean_sched.gains[t - 1]);

        const GaussianBelief spoof_prior = predict(sys, spoof, scn.u);
        const GaussianBelief spoof_post = update(sys, spoof_prior, ztil, spoof_sched.gains[t - 1]);

        StepRecord step;
        step.t = t;
        step.x = x;
        step.z = z;
        step.eps = eps;
        step.m_clean = clean.mean;
        step.m_spoof = spoof_post.mean;
        if (detector) {
            step.g = detector_statistic(detector->form, sys, spoof_prior, spoof_post, ztil);
            step.alarm = step.g > detector->threshold;
            rec.detected = rec.detected || step.alarm;
        }
        spoof = spoof_post;

        // diff_t = A_t diff_{t-1} + B_t + C_t; B vanishes identically when the
        // schedules match, keeping the series measurement-free.
        const Mat& kt = spoof_sched.gains[t - 1];
        const Mat a = sys.f - kt * sys.h * sys.f;
        diff = a * diff - kt * eps;
        if (!same_sched) {
            const Vec innov = z - sys.h * (sys.f * prev_clean_mean + sys.g * scn.u);
            diff = diff + (clean_sched.gains[t - 1] - kt) * innov;
        }
        step.sep_l1 = l1_norm(diff);
        step.d_t = t <= d_profile.size() ? d_profile[t - 1] : 0.0;

        rec.energy_l1 += l1_norm(eps);
        if (track_attacker) attacker = ingest(sys, attacker, scn.u, z, eps);
        rec.steps.push_back(std::move(step));
    }
    return rec;
}

Vec plan_input(const SpoofPlan* plan, std::size_t t, std::size_t dim) {
    if (plan && t <= plan->epsilons.size()) return plan->epsilons[t - 1];
    return Vec::zeros(dim);
}

template <typename TrialFn>
Aggregate aggregate_trials(const Scenario& scn, std::size_t n_trials, std::uint64_t master_seed, unsigned threads,
                           TrialFn&& trial_fn) {
    if (n_trials == 0) throw DimensionError("monte_carlo: need at least one trial");
    std::vector<RunRecord> records(n_trials);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_trials)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_trials; ++i) records[i] = trial_fn(i, derive_seed(master_seed, i));
    } else {
        std::vector<std::future<void>> futs;
        futs.reserve(workers);
        for (unsigned wkr = 0; wkr < workers; ++wkr) {
            futs.push_back(std::async(std::launch::async, [&, wkr] {
                for (std::size_t i = wkr; i < n_trials; i += workers) records[i] = trial_fn(i, derive_seed(master_seed, i));
            }));
        }
        for (auto& f : futs) f.get();
    }

    Aggregate agg;
    agg.n_trials = n_trials;
    agg.sep_mean.assign(scn.steps, 0.0);
    agg.sep_min.assign(scn.steps, std::numeric_limits<double>::infinity());
    agg.sep_max.assign(scn.steps, -std::numeric_limits<double>::infinity());
    agg.trials.reserve(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) {
        const RunRecord& rec = records[i];
        TrialSummary s;
        s.energy_l1 = rec.energy_l1;
        s.detected = rec.detected;
        s.sep.reserve(scn.steps);
        for (std::size_t t = 0; t < scn.steps; ++t) {
            const double sep = rec.steps[t].sep_l1;
            s.sep.push_back(sep);
            agg.sep_mean[t] += sep;
            agg.sep_min[t] = std::min(agg.sep_min[t], sep);
            agg.sep_max[t] = std::max(agg.sep_max[t], sep);
        }
        agg.energy_mean += rec.energy_l1;
        if (rec.detected) ++agg.detected_count;
        agg.trials.push_back(std::move(s));
    }
    for (double& v : agg.sep_mean) v /= static_cast<double>(n_trials);
    agg.energy_mean /= static_cast<double>(n_trials);
    agg.first_run = records.front();
    return agg;
}

} // namespace

RunRecord simulate(const Scenario& scn, const SimInputs& in) {
    scn.sys.validate();
    const GainSchedule clean_sched = build_gain_schedule(scn.sys, scn.clean_prior.cov, scn.steps);
    const GainSchedule spoof_sched = build_gain_schedule(scn.sys, scn.spoofed_prior.cov, scn.steps);
    const bool same = schedules_equal(clean_sched, spoof_sched);
    return run_trial(scn, in.detector, in.d_profile, clean_sched, spoof_sched, same, false,
                     [&](std::size_t t, const OnlineState&) { return plan_input(in.plan, t, scn.sys.state_dim()); });
}

RunRecord simulate_online(const Scenario& scn, const OnlineOptions& opts, const DetectorConfig* detector) {
    scn.sys.validate();
    const GainSchedule clean_sched = build_gain_schedule(scn.sys, scn.clean_prior.cov, scn.steps);
    const GainSchedule spoof_sched = build_gain_schedule(scn.sys, scn.spoofed_prior.cov, scn.steps);
    const bool same = schedules_equal(clean_sched, spoof_sched);
    return run_trial(scn, detector, opts.d_profile, clean_sched, spoof_sched, same, true,
                     [&](std::size_t t, const OnlineState& attacker) {
                         OnlineWindowSpec win;
                         win.norm_p = opts.norm_p;
                         win.d.assign(opts.window + 1, 0.0);
                         for (std::size_t j = 0; j <= opts.window; ++j) {
                             const std::size_t abs_t = t + j;
                             if (abs_t <= opts.d_profile.size()) win.d[j] = opts.d_profile[abs_t - 1];
                         }
                         win.gamma.assign(opts.window + 1, 1.0);
                         return plan_step(scn.sys, attacker, win);
                     });
}

Aggregate monte_carlo(const Scenario& scn, const SimInputs& in, std::size_t n_trials, std::uint64_t master_seed,
                      unsigned threads) {
    return aggregate_trials(scn, n_trials, master_seed, threads, [&](std::size_t, std::uint64_t seed) {
        Scenario trial = scn;
        trial.seed = seed;
        return simulate(trial, in);
    });
}

Aggregate monte_carlo_online(const Scenario& scn, const OnlineOptions& opts, const DetectorConfig* detector,
                             std::size_t n_trials, std::uint64_t master_seed, unsigned threads) {
    return aggregate_trials(scn, n_trials, master_seed, threads, [&](std::size_t, std::uint64_t seed) {
        Scenario trial = scn;
        trial.seed = seed;
        return simulate_online(trial, opts, detector);
    });
}

EnergyComparison compare_energy(const Scenario& scn, const OnlineOptions& opts, std::size_t n_trials,
                                std::uint64_t master_seed, unsigned threads) {
    SpoofSpec spec;
    spec.horizon = scn.steps;
    spec.d.assign(scn.steps, 0.0);
    for (std::size_t t = 0; t < std::min(scn.steps, opts.d_profile.size()); ++t) spec.d[t] = opts.d_profile[t];
    spec.gamma.assign(scn.steps, 1.0);
    spec.norm_p = opts.norm_p;
    spec.m0_bias = scn.attacker_guess.mean - scn.spoofed_prior.mean;
    const DesignInputs in = prepare_design(scn.sys, scn.spoofed_prior.cov, spec);
    SpoofPlan plan = spec.norm_p == 1 ? design_l1(in, spec) : design_l2(in, spec);

    SimInputs sim_in;
    sim_in.plan = &plan;
    sim_in.d_profile = spec.d;
    const Aggregate off = monte_carlo(scn, sim_in, n_trials, master_seed, threads);
    const Aggregate on = monte_carlo_online(scn, opts, nullptr, n_trials, master_seed, threads);

    EnergyComparison cmp;
    cmp.offline_plan = std::move(plan);
    cmp.offline_energy.reserve(n_trials);
    cmp.online_energy.reserve(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) {
        cmp.offline_energy.push_back(off.trials[i].energy_l1);
        cmp.online_energy.push_back(on.trials[i].energy_l1);
    }
    cmp.offline_mean = off.energy_mean;
    cmp.online_mean = on.energy_mean;
    return cmp;
}

} // namespace spoofkit
