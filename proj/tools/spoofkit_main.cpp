#include <cstdio>
#include <filesystem>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "spoofkit/config.hpp"
#include "spoofkit/errors.hpp"
#include "spoofkit/io.hpp"
#include "spoofkit/stats.hpp"

namespace {

using namespace spoofkit;

struct GlobalOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    unsigned threads = 0; // 0 = all hardware threads

    bool seed_given() const { return seed_opt && seed_opt->count() > 0; }
};

unsigned resolve_threads(const GlobalOpts& g) {
    if (g.threads > 0) return g.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

ExperimentConfig resolve_config(const GlobalOpts& g) {
    ExperimentConfig cfg = g.preset.empty() ? ExperimentConfig{} : preset_config(g.preset);
    if (!g.config_path.empty()) cfg = load_config_file(g.config_path, cfg);
    if (g.seed_given()) cfg.seed = g.seed;
    return cfg;
}

// Output-file path inside the --out directory, creating the directory on
// first use.
std::string join(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

SpoofPlan design_from_config(const ExperimentConfig& cfg, DesignInputs* inputs_out = nullptr) {
    const LinearSystem sys = to_linear_system(cfg);
    const SpoofSpec spec = to_spoof_spec(cfg);
    DesignInputs in = prepare_design(sys, cfg.spoofed_cov, spec);
    SpoofPlan plan = spec.norm_p == 1 ? design_l1(in, spec) : design_l2(in, spec);
    if (inputs_out) *inputs_out = std::move(in);
    return plan;
}

void print_plan_summary(const ExperimentConfig& cfg, const DesignInputs& in, const SpoofPlan& plan) {
    const SpoofSpec spec = to_spoof_spec(cfg);
    const PlanCheck check = verify_plan(in, spec, plan);
    std::printf("method: %s\n", to_string(plan.method).c_str());
    std::printf("lp solves: %llu\n", static_cast<unsigned long long>(plan.lp_count));
    std::printf("objective: %.6f\n", plan.objective);
    std::printf("%6s %10s %10s %12s\n", "step", "desired", "achieved", "margin");
    for (const PlanCheckEntry& e : check.entries)
        std::printf("%6zu %10.4f %10.4f %12.3e\n", e.step, e.desired, e.achieved, e.margin);
    std::printf("constraints %s (min margin %.3e)\n", check.pass ? "satisfied" : "VIOLATED", check.min_margin);
}

double calibrated_threshold(const ExperimentConfig& cfg, unsigned threads, bool quiet) {
    if (cfg.det_threshold > 0.0) return cfg.det_threshold;
    const CalibrationParams params = to_calibration_params(cfg);
    const CalibrationResult res = calibrate_threshold(params, cfg.seed, threads);
    if (!quiet)
        std::printf("calibrated threshold %.4f (%s rate %.5f, target %.5f)\n", res.threshold,
                    to_string(params.metric).c_str(), res.achieved_rate, params.target);
    return res.threshold;
}

void cmd_design_offline(const GlobalOpts& g) {
    const ExperimentConfig cfg = resolve_config(g);
    DesignInputs in;
    const SpoofPlan plan = design_from_config(cfg, &in);
    write_plans_csv(join(g.out_dir, "plans.csv"), plan);
    print_plan_summary(cfg, in, plan);
}

void cmd_simulate(const GlobalOpts& g) {
    const ExperimentConfig cfg = resolve_config(g);
    const unsigned threads = resolve_threads(g);
    const Scenario scn = to_scenario(cfg);

    bool any_d = false;
    for (double v : cfg.d)
        if (v != 0.0) any_d = true;

    SpoofPlan plan;
    SimInputs in;
    if (any_d) {
        plan = design_from_config(cfg);
        in.plan = &plan;
        in.d_profile = cfg.d;
        write_plans_csv(join(g.out_dir, "plans.csv"), plan);
    }
    DetectorConfig det = to_detector_config(cfg);
    if (cfg.det_enabled) {
        det.threshold = calibrated_threshold(cfg, threads, false);
        in.detector = &det;
    }

    const Aggregate agg = monte_carlo(scn, in, cfg.trials, cfg.seed, threads);
    write_runs_csv(join(g.out_dir, "runs.csv"), agg.first_run);

    std::vector<SvgSeries> series;
    series.push_back({"mean separation", agg.sep_mean});
    series.push_back({"min", agg.sep_min});
    series.push_back({"max", agg.sep_max});
    std::vector<double> desired(scn.steps, 0.0);
    for (std::size_t t = 0; t < std::min(scn.steps, cfg.d.size()); ++t) desired[t] = cfg.d[t];
    series.push_back({"desired", desired});
    write_series_svg(join(g.out_dir, "sep_series.svg"), "estimate separation (L1)", series);

    std::printf("trials: %zu, steps: %zu\n", agg.n_trials, scn.steps);
    std::printf("mean spoofing energy (L1): %.6f\n", agg.energy_mean);
    if (any_d) {
        std::printf("%6s %10s %12s %10s %10s\n", "step", "desired", "mean sep", "min", "max");
        for (std::size_t t = 1; t <= scn.steps; ++t) {
            if (desired[t - 1] == 0.0) continue;
            std::printf("%6zu %10.4f %12.4f %10.4f %10.4f\n", t, desired[t - 1], agg.sep_mean[t - 1],
                        agg.sep_min[t - 1], agg.sep_max[t - 1]);
        }
    }
    if (cfg.det_enabled)
        std::printf("trials with an alarm: %zu of %zu (%.4f)\n", agg.detected_count, agg.n_trials,
                    static_cast<double>(agg.detected_count) / static_cast<double>(agg.n_trials));
}

void cmd_design_online(const GlobalOpts& g) {
    const ExperimentConfig cfg = resolve_config(g);
    const unsigned threads = resolve_threads(g);
    const Scenario scn = to_scenario(cfg);
    const OnlineOptions opts = to_online_options(cfg);

    if (cfg.trials <= 1) {
        const RunRecord rec = simulate_online(scn, opts, nullptr);
        write_runs_csv(join(g.out_dir, "runs.csv"), rec);
        SpoofPlan applied;
        for (const StepRecord& s : rec.steps) applied.epsilons.push_back(s.eps);
        write_plans_csv(join(g.out_dir, "plans.csv"), applied);
        std::printf("steps: %zu, window: %zu\n", scn.steps, opts.window);
        std::printf("applied spoofing energy (L1): %.6f\n", rec.energy_l1);
        std::printf("%6s %10s %10s\n", "step", "desired", "sep");
        for (const StepRecord& s : rec.steps)
            if (s.d_t != 0.0) std::printf("%6zu %10.4f %10.4f\n", s.t, s.d_t, s.sep_l1);
        return;
    }

    const EnergyComparison cmp = compare_energy(scn, opts, cfg.trials, cfg.seed, threads);
    const Aggregate on = monte_carlo_online(scn, opts, nullptr, 1, cfg.seed, 1);
    write_runs_csv(join(g.out_dir, "runs.csv"), on.first_run);
    write_plans_csv(join(g.out_dir, "plans.csv"), cmp.offline_plan);
    std::vector<double> diff(cmp.online_energy.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = cmp.online_energy[i] - cmp.offline_energy[i];
    const double q05 = bootstrap_mean_quantile(diff, 0.05, 10000, cfg.seed ^ 0x5bd1e995u);
    std::printf("trials: %zu, window: %zu\n", cfg.trials, opts.window);
    std::printf("mean offline energy (L1): %.6f\n", cmp.offline_mean);
    std::printf("mean online energy  (L1): %.6f\n", cmp.online_mean);
    std::printf("online - offline mean: %.6f (bootstrap 5%% quantile %.6f)\n", cmp.online_mean - cmp.offline_mean,
                q05);
}

void cmd_calibrate(const GlobalOpts& g) {
    const ExperimentConfig cfg = resolve_config(g);
    const CalibrationParams params = to_calibration_params(cfg);
    const CalibrationResult res = calibrate_threshold(params, cfg.seed, resolve_threads(g));
    write_calibration_csv(join(g.out_dir, "calibration.csv"), res.curve);
    std::printf("form: %s, metric: %s\n", to_string(params.form).c_str(), to_string(params.metric).c_str());
    std::printf("threshold: %.6f\n", res.threshold);
    std::printf("false-alarm rate at threshold: %.6f (target %.6f)\n", res.achieved_rate, params.target);
}

void cmd_detect(const GlobalOpts& g) {
    const ExperimentConfig cfg = resolve_config(g);
    const unsigned threads = resolve_threads(g);
    DetectionParams params;
    params.scenario = to_scenario(cfg);
    params.plan = design_from_config(cfg);
    params.d_profile = cfg.d;
    params.detector = to_detector_config(cfg);
    params.detector.threshold = calibrated_threshold(cfg, threads, false);
    params.n_trials = cfg.trials;
    const TrialReport rep = detection_experiment(params, cfg.seed, threads);
    std::printf("trials: %zu over %zu steps\n", rep.n_trials, params.scenario.steps);
    std::printf("detected (attacked): %zu  rate %.5f\n", rep.detected, rep.rate);
    std::printf("detected (matched clean): %zu  rate %.5f\n", rep.null_detected, rep.null_rate);
    std::printf("p-value vs matched false-alarm rate: %.5g\n", rep.p_value);
}

void cmd_pvalue(std::uint64_t x, std::uint64_t n, double p0) {
    std::printf("%.5g\n", binom_pvalue(x, n, p0));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum-energy measurement spoofing against Kalman filter trackers"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--preset", g.preset, "named parameter set (fig3a fig3b fig4 fig5 fig6 fig7 fig8 fig9)");
    app.add_option("--out", g.out_dir, "output directory for CSV/SVG files");
    g.seed_opt = app.add_option("--seed", g.seed, "master random seed (overrides the configuration)");
    app.add_option("--threads", g.threads, "worker threads (0 = all hardware threads)");
    app.fallthrough();

    app.add_subcommand("design-offline", "solve the separation-profile design problem and write plans.csv")
        ->callback([&] { cmd_design_offline(g); });
    app.add_subcommand("simulate", "Monte Carlo runs of a designed attack; writes runs.csv and sep_series.svg")
        ->callback([&] { cmd_simulate(g); });
    app.add_subcommand("design-online", "closed-loop re-planning run; with trials > 1 compares energy to offline")
        ->callback([&] { cmd_design_online(g); });
    app.add_subcommand("calibrate-detector", "sweep detector thresholds on clean runs; writes calibration.csv")
        ->callback([&] { cmd_calibrate(g); });
    app.add_subcommand("detect-experiment", "attacked vs matched clean detection rates with a binomial p-value")
        ->callback([&] { cmd_detect(g); });

    std::uint64_t pv_x = 0, pv_n = 0;
    double pv_p0 = 0.0;
    auto* pv = app.add_subcommand("pvalue", "binomial upper-tail probability P(X >= x), X ~ B(n, p0)");
    pv->add_option("--x", pv_x, "observed count")->required();
    pv->add_option("--n", pv_n, "number of trials")->required();
    pv->add_option("--p0", pv_p0, "null success probability")->required();
    pv->callback([&] { cmd_pvalue(pv_x, pv_n, pv_p0); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse the library's many parse-failure codes onto the documented
        // contract: 0 for --help/--version, 1 for any usage error.
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const spoofkit::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
