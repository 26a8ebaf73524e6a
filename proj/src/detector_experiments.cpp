#include "spoofkit/detector_experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "spoofkit/errors.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {

namespace {

// Fraction of `sorted` strictly above x.
double frac_above(const std::vector<double>& sorted, double x) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

std::vector<CalibrationPoint> sweep(const std::vector<std::vector<double>>& per_sim_sorted, double grid_min,
                                    double grid_max, double grid_step) {
    std::vector<CalibrationPoint> curve;
    for (double tau = grid_min; tau <= grid_max + 1e-12; tau += grid_step) {
        CalibrationPoint p;
        p.threshold = tau;
        p.rate_min = 1.0;
        p.rate_max = 0.0;
        for (const auto& sorted : per_sim_sorted) {
            const double r = frac_above(sorted, tau);
            p.rate_mean += r;
            p.rate_min = std::min(p.rate_min, r);
            p.rate_max = std::max(p.rate_max, r);
        }
        p.rate_mean /= static_cast<double>(per_sim_sorted.size());
        curve.push_back(p);
    }
    return curve;
}

} // namespace

std::string to_string(AlarmMetric m) {
    return m == AlarmMetric::per_step ? "per_step" : "per_trial";
}

CalibrationResult calibrate_threshold(const CalibrationParams& params, std::uint64_t master_seed, unsigned threads) {
    if (params.n_sims == 0 || params.trials_per_sim == 0)
        throw DimensionError("calibrate_threshold: need at least one batch and one trial");
    if (params.grid_step <= 0.0 || params.grid_max < params.grid_min)
        throw DimensionError("calibrate_threshold: malformed threshold grid");

    DetectorConfig det;
    det.form = params.form;
    det.threshold = std::numeric_limits<double>::infinity();

    // Per batch: every statistic value, and every trial's maximum, sorted.
    std::vector<std::vector<double>> step_stats(params.n_sims);
    std::vector<std::vector<double>> trial_maxima(params.n_sims);
    const auto run_sim = [&](std::size_t s) {
        std::vector<double>& steps = step_stats[s];
        std::vector<double>& maxima = trial_maxima[s];
        steps.reserve(params.trials_per_sim * params.scenario.steps);
        maxima.reserve(params.trials_per_sim);
        SimInputs in;
        in.detector = &det;
        for (std::size_t j = 0; j < params.trials_per_sim; ++j) {
            Scenario trial = params.scenario;
            trial.seed = derive_seed(master_seed, s * params.trials_per_sim + j);
            const RunRecord rec = simulate(trial, in);
            double mx = -std::numeric_limits<double>::infinity();
            for (const StepRecord& st : rec.steps) {
                steps.push_back(st.g);
                mx = std::max(mx, st.g);
            }
            maxima.push_back(mx);
        }
        std::sort(steps.begin(), steps.end());
        std::sort(maxima.begin(), maxima.end());
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(params.n_sims)));
    if (workers == 1) {
        for (std::size_t s = 0; s < params.n_sims; ++s) run_sim(s);
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned wkr = 0; wkr < workers; ++wkr)
            futs.push_back(std::async(std::launch::async, [&, wkr] {
                for (std::size_t s = wkr; s < params.n_sims; s += workers) run_sim(s);
            }));
        for (auto& f : futs) f.get();
    }

    CalibrationResult result;
    const auto& chosen = params.metric == AlarmMetric::per_step ? step_stats : trial_maxima;
    const auto& other = params.metric == AlarmMetric::per_step ? trial_maxima : step_stats;
    result.curve = sweep(chosen, params.grid_min, params.grid_max, params.grid_step);
    result.other_curve = sweep(other, params.grid_min, params.grid_max, params.grid_step);

    bool found = false;
    for (const CalibrationPoint& p : result.curve) {
        if (p.rate_mean <= params.target) {
            result.threshold = p.threshold;
            result.achieved_rate = p.rate_mean;
            found = true;
            break;
        }
    }
    if (!found)
        throw InfeasibleDesignError("calibrate_threshold: no grid threshold reaches the target false-alarm rate");
    return result;
}

TrialReport detection_experiment(const DetectionParams& params, std::uint64_t master_seed, unsigned threads) {
    if (params.n_trials == 0) throw DimensionError("detection_experiment: need at least one trial");

    std::vector<unsigned char> attacked(params.n_trials, 0);
    std::vector<unsigned char> null_run(params.n_trials, 0);
    const auto run_pair = [&](std::size_t i) {
        Scenario trial = params.scenario;
        trial.seed = derive_seed(master_seed, i);
        SimInputs in;
        in.detector = &params.detector;
        in.d_profile = params.d_profile;
        in.plan = &params.plan;
        attacked[i] = simulate(trial, in).detected ? 1 : 0;
        in.plan = nullptr;
        null_run[i] = simulate(trial, in).detected ? 1 : 0;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(params.n_trials)));
    if (workers == 1) {
        for (std::size_t i = 0; i < params.n_trials; ++i) run_pair(i);
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned wkr = 0; wkr < workers; ++wkr)
            futs.push_back(std::async(std::launch::async, [&, wkr] {
                for (std::size_t i = wkr; i < params.n_trials; i += workers) run_pair(i);
            }));
        for (auto& f : futs) f.get();
    }

    TrialReport report;
    report.n_trials = params.n_trials;
    for (std::size_t i = 0; i < params.n_trials; ++i) {
        report.detected += attacked[i];
        report.null_detected += null_run[i];
    }
    const double n = static_cast<double>(params.n_trials);
    report.rate = static_cast<double>(report.detected) / n;
    report.null_rate = static_cast<double>(report.null_detected) / n;
    // Degenerate empirical null rates are pulled half a count inside (0, 1) so
    // the binomial tail stays defined.
    const double p0 = std::min(std::max(report.null_rate, 0.5 / n), 1.0 - 0.5 / n);
    report.p_value = binom_pvalue(report.detected, report.n_trials, p0);
    return report;
}

} // namespace spoofkit
