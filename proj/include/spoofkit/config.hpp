#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofkit/detector_experiments.hpp"
#include "spoofkit/sim.hpp"
#include "spoofkit/spoof_design.hpp"

namespace spoofkit {

// Flat key=value experiment description with [section] grouping. All matrices
// are 2x2 row-major. Parsing overlays only the keys present in the text onto
// an existing configuration and rejects unknown sections or keys; writing
// emits every key in a fixed order, with doubles printed so that a written
// configuration parses back to an identical one.
struct ExperimentConfig {
    // [system]
    Mat f = Mat::identity(2);
    Mat g = Mat::identity(2);
    Mat h = Mat::identity(2);
    Mat r = Mat::scaled_identity(2, 0.5);
    Mat q = Mat::scaled_identity(2, 0.5);

    // [scenario]
    Vec x0 = Vec{0.0, 0.0};
    bool x0_from_clean = false; // draw x0 from the sampled clean prior
    Vec u = Vec{1.0, 1.0};
    std::size_t steps = 20;
    std::uint64_t seed = 12345;
    std::size_t trials = 100;

    // [clean_prior]
    Vec clean_mean = Vec{0.0, 0.0};
    Mat clean_cov = Mat::identity(2);
    double clean_mean_spread = 0.0;

    // [spoofed_prior]
    Vec spoofed_mean = Vec{0.0, 0.0};
    Mat spoofed_cov = Mat::identity(2);

    // [attacker_guess]
    Vec guess_mean = Vec{0.0, 0.0};
    Mat guess_cov = Mat::identity(2);

    // [design]
    std::size_t horizon = 20;
    std::vector<double> d = std::vector<double>(20, 0.0); // dense, length horizon
    std::vector<double> gamma = std::vector<double>(20, 1.0);
    int norm_p = 1;
    Vec m0_bias = Vec{0.0, 0.0};

    // [online]
    std::size_t window = 15;

    // [detector]
    bool det_enabled = false;
    DetectorForm det_form = DetectorForm::normalized_innovation;
    double det_threshold = 0.0; // 0 = calibrate before use
    double det_target = 0.11054;
    AlarmMetric det_metric = AlarmMetric::per_step;
    double grid_min = 0.0;
    double grid_max = 20.0;
    double grid_step = 0.01;
    std::size_t calib_sims = 100;
    std::size_t calib_trials = 1000;
    std::size_t calib_steps = 20;

    bool operator==(const ExperimentConfig&) const = default;
};

// Overlays `text` onto `cfg`. Throws ConfigError on unknown keys, malformed
// values, or profile lengths that disagree with the horizon.
void parse_config(const std::string& text, ExperimentConfig& cfg);

std::string write_config(const ExperimentConfig& cfg);

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base);

// Named parameter sets for the bundled experiments; throws ConfigError for an
// unknown name. Names: fig3a fig3b fig4 fig5 fig6 fig7 fig8 fig9.
ExperimentConfig preset_config(const std::string& name);

std::vector<std::string> preset_names();

LinearSystem to_linear_system(const ExperimentConfig& cfg);
Scenario to_scenario(const ExperimentConfig& cfg);
SpoofSpec to_spoof_spec(const ExperimentConfig& cfg);
DetectorConfig to_detector_config(const ExperimentConfig& cfg);
OnlineOptions to_online_options(const ExperimentConfig& cfg);
CalibrationParams to_calibration_params(const ExperimentConfig& cfg);

} // namespace spoofkit
