#pragma once

#include <cstdint>
#include <vector>

#include "spoofkit/chi2.hpp"
#include "spoofkit/sim.hpp"

namespace spoofkit {

// False-alarm rate definition used when choosing a threshold. per_step counts
// alarms over all filter steps; per_trial counts runs with at least one alarm.
enum class AlarmMetric { per_step, per_trial };

std::string to_string(AlarmMetric m);

struct CalibrationParams {
    Scenario scenario; // unattacked template; `steps` is the run length
    DetectorForm form = DetectorForm::normalized_innovation;
    AlarmMetric metric = AlarmMetric::per_step;
    double target = 0.11054;
    std::size_t n_sims = 100;
    std::size_t trials_per_sim = 1000;
    double grid_min = 0.0;
    double grid_max = 20.0;
    double grid_step = 0.01;
};

struct CalibrationPoint {
    double threshold = 0.0;
    double rate_mean = 0.0;
    double rate_min = 0.0;
    double rate_max = 0.0;
};

struct CalibrationResult {
    double threshold = 0.0;     // smallest grid value whose mean rate <= target
    double achieved_rate = 0.0; // mean rate at that threshold
    std::vector<CalibrationPoint> curve;       // chosen metric
    std::vector<CalibrationPoint> other_curve; // the other metric, for reference
};

// Runs n_sims batches of trials_per_sim unattacked trials, sweeps the
// threshold grid over the collected statistics, and returns the rate curves
// (mean/min/max across batches) together with the calibrated threshold.
// Throws InfeasibleDesignError when no grid point meets the target.
CalibrationResult calibrate_threshold(const CalibrationParams& params, std::uint64_t master_seed,
                                      unsigned threads = 1);

struct DetectionParams {
    Scenario scenario; // `steps` is the observation window
    SpoofPlan plan;
    std::vector<double> d_profile;
    DetectorConfig detector;
    std::size_t n_trials = 1000;
};

struct TrialReport {
    std::size_t n_trials = 0;
    std::size_t detected = 0;      // attacked runs with >= 1 alarm
    std::size_t null_detected = 0; // matched unattacked runs with >= 1 alarm
    double rate = 0.0;
    double null_rate = 0.0;
    double p_value = 1.0; // binomial upper tail of `detected` under the null rate
};

// Pairs each attacked trial with an unattacked run on the same seed, so the
// detection rate is compared against a matched false-alarm rate over the same
// observation window.
TrialReport detection_experiment(const DetectionParams& params, std::uint64_t master_seed, unsigned threads = 1);

} // namespace spoofkit
