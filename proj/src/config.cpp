#include "spoofkit/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "spoofkit/errors.hpp"

namespace spoofkit {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ' ';
        out += fmt_double(vs[i]);
    }
    return out;
}

std::string fmt_vec(const Vec& v) { return fmt_list(v.e); }
std::string fmt_mat(const Mat& m) { return fmt_list(m.e); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + s + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-integer value '" + s + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError("config: key '" + key + "' must be true or false, got '" + s + "'");
}

Vec parse_vec2(const std::string& key, const std::string& s) {
    const auto toks = tokens(s);
    if (toks.size() != 2) throw ConfigError("config: key '" + key + "' needs 2 numbers");
    return Vec{parse_double(key, toks[0]), parse_double(key, toks[1])};
}

Mat parse_mat2(const std::string& key, const std::string& s) {
    const auto toks = tokens(s);
    if (toks.size() != 4) throw ConfigError("config: key '" + key + "' needs 4 numbers (row-major 2x2)");
    Mat m(2, 2);
    for (std::size_t i = 0; i < 4; ++i) m.e[i] = parse_double(key, toks[i]);
    return m;
}

// "t:v" pairs (sparse) or exactly `horizon` plain numbers (dense).
std::vector<double> parse_profile(const std::string& key, const std::string& s, std::size_t horizon) {
    std::vector<double> out(horizon, 0.0);
    const auto toks = tokens(s);
    if (toks.empty()) return out;
    const bool sparse = toks[0].find(':') != std::string::npos;
    if (sparse) {
        for (const auto& tok : toks) {
            const auto sep = tok.find(':');
            if (sep == std::string::npos)
                throw ConfigError("config: key '" + key + "' mixes step:value pairs with plain numbers");
            const std::uint64_t t = parse_u64(key, tok.substr(0, sep));
            if (t < 1 || t > horizon)
                throw ConfigError("config: key '" + key + "' has step " + std::to_string(t) +
                                  " outside 1..horizon");
            out[t - 1] = parse_double(key, tok.substr(sep + 1));
        }
        return out;
    }
    if (toks.size() != horizon)
        throw ConfigError("config: key '" + key + "' needs " + std::to_string(horizon) + " values, got " +
                          std::to_string(toks.size()));
    for (std::size_t i = 0; i < horizon; ++i) out[i] = parse_double(key, toks[i]);
    return out;
}

// One broadcast value or exactly `horizon` values.
std::vector<double> parse_weights(const std::string& key, const std::string& s, std::size_t horizon) {
    const auto toks = tokens(s);
    if (toks.size() == 1) return std::vector<double>(horizon, parse_double(key, toks[0]));
    if (toks.size() != horizon)
        throw ConfigError("config: key '" + key + "' needs 1 or " + std::to_string(horizon) + " values");
    std::vector<double> out(horizon);
    for (std::size_t i = 0; i < horizon; ++i) out[i] = parse_double(key, toks[i]);
    return out;
}

DetectorForm parse_form(const std::string& s) {
    if (s == "paper_literal") return DetectorForm::paper_literal;
    if (s == "normalized_innovation") return DetectorForm::normalized_innovation;
    throw ConfigError("config: detector form must be paper_literal or normalized_innovation, got '" + s + "'");
}

AlarmMetric parse_metric(const std::string& s) {
    if (s == "per_step") return AlarmMetric::per_step;
    if (s == "per_trial") return AlarmMetric::per_trial;
    throw ConfigError("config: detector metric must be per_step or per_trial, got '" + s + "'");
}

std::string profile_text(const std::vector<double>& profile) {
    std::string out;
    for (std::size_t t = 1; t <= profile.size(); ++t) {
        if (profile[t - 1] == 0.0) continue;
        if (!out.empty()) out += ' ';
        out += std::to_string(t) + ":" + fmt_double(profile[t - 1]);
    }
    return out;
}

std::string weights_text(const std::vector<double>& w) {
    bool uniform = true;
    for (double v : w)
        if (v != w.front()) uniform = false;
    if (uniform && !w.empty()) return fmt_double(w.front());
    return fmt_list(w);
}

} // namespace

void parse_config(const std::string& text, ExperimentConfig& cfg) {
    // Collect raw values first so keys can appear in any order (the design
    // profiles need the horizon before they can be materialized).
    std::map<std::string, std::string> raw;
    std::string section;
    std::istringstream iss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key + "' outside any section");
        raw[section + "." + key] = trim(line.substr(eq + 1));
    }

    auto take = [&raw](const char* name) -> const std::string* {
        const auto it = raw.find(name);
        return it == raw.end() ? nullptr : &it->second;
    };

    if (const auto* v = take("system.f")) cfg.f = parse_mat2("system.f", *v);
    if (const auto* v = take("system.g")) cfg.g = parse_mat2("system.g", *v);
    if (const auto* v = take("system.h")) cfg.h = parse_mat2("system.h", *v);
    if (const auto* v = take("system.r")) cfg.r = parse_mat2("system.r", *v);
    if (const auto* v = take("system.q")) cfg.q = parse_mat2("system.q", *v);
    if (const auto* v = take("scenario.x0")) cfg.x0 = parse_vec2("scenario.x0", *v);
    if (const auto* v = take("scenario.x0_from_clean")) cfg.x0_from_clean = parse_bool("scenario.x0_from_clean", *v);
    if (const auto* v = take("scenario.u")) cfg.u = parse_vec2("scenario.u", *v);
    if (const auto* v = take("scenario.steps")) cfg.steps = parse_u64("scenario.steps", *v);
    if (const auto* v = take("scenario.seed")) cfg.seed = parse_u64("scenario.seed", *v);
    if (const auto* v = take("scenario.trials")) cfg.trials = parse_u64("scenario.trials", *v);
    if (const auto* v = take("clean_prior.mean")) cfg.clean_mean = parse_vec2("clean_prior.mean", *v);
    if (const auto* v = take("clean_prior.cov")) cfg.clean_cov = parse_mat2("clean_prior.cov", *v);
    if (const auto* v = take("clean_prior.mean_spread"))
        cfg.clean_mean_spread = parse_double("clean_prior.mean_spread", *v);
    if (const auto* v = take("spoofed_prior.mean")) cfg.spoofed_mean = parse_vec2("spoofed_prior.mean", *v);
    if (const auto* v = take("spoofed_prior.cov")) cfg.spoofed_cov = parse_mat2("spoofed_prior.cov", *v);
    if (const auto* v = take("attacker_guess.mean")) cfg.guess_mean = parse_vec2("attacker_guess.mean", *v);
    if (const auto* v = take("attacker_guess.cov")) cfg.guess_cov = parse_mat2("attacker_guess.cov", *v);
    if (const auto* v = take("design.horizon")) {
        cfg.horizon = parse_u64("design.horizon", *v);
        cfg.d.assign(cfg.horizon, 0.0);
        cfg.gamma.assign(cfg.horizon, 1.0);
    }
    if (const auto* v = take("design.d")) cfg.d = parse_profile("design.d", *v, cfg.horizon);
    if (const auto* v = take("design.gamma")) cfg.gamma = parse_weights("design.gamma", *v, cfg.horizon);
    if (const auto* v = take("design.norm_p")) {
        cfg.norm_p = static_cast<int>(parse_u64("design.norm_p", *v));
        if (cfg.norm_p != 1 && cfg.norm_p != 2) throw ConfigError("config: design.norm_p must be 1 or 2");
    }
    if (const auto* v = take("design.m0_bias")) cfg.m0_bias = parse_vec2("design.m0_bias", *v);
    if (const auto* v = take("online.window")) cfg.window = parse_u64("online.window", *v);
    if (const auto* v = take("detector.enabled")) cfg.det_enabled = parse_bool("detector.enabled", *v);
    if (const auto* v = take("detector.form")) cfg.det_form = parse_form(*v);
    if (const auto* v = take("detector.threshold")) cfg.det_threshold = parse_double("detector.threshold", *v);
    if (const auto* v = take("detector.target")) cfg.det_target = parse_double("detector.target", *v);
    if (const auto* v = take("detector.metric")) cfg.det_metric = parse_metric(*v);
    if (const auto* v = take("detector.grid_min")) cfg.grid_min = parse_double("detector.grid_min", *v);
    if (const auto* v = take("detector.grid_max")) cfg.grid_max = parse_double("detector.grid_max", *v);
    if (const auto* v = take("detector.grid_step")) cfg.grid_step = parse_double("detector.grid_step", *v);
    if (const auto* v = take("detector.calib_sims")) cfg.calib_sims = parse_u64("detector.calib_sims", *v);
    if (const auto* v = take("detector.calib_trials")) cfg.calib_trials = parse_u64("detector.calib_trials", *v);
    if (const auto* v = take("detector.calib_steps")) cfg.calib_steps = parse_u64("detector.calib_steps", *v);

    static const char* known[] = {
        "system.f", "system.g", "system.h", "system.r", "system.q",
        "scenario.x0", "scenario.x0_from_clean", "scenario.u", "scenario.steps", "scenario.seed",
        "scenario.trials",
        "clean_prior.mean", "clean_prior.cov", "clean_prior.mean_spread",
        "spoofed_prior.mean", "spoofed_prior.cov",
        "attacker_guess.mean", "attacker_guess.cov",
        "design.horizon", "design.d", "design.gamma", "design.norm_p", "design.m0_bias",
        "online.window",
        "detector.enabled", "detector.form", "detector.threshold", "detector.target", "detector.metric",
        "detector.grid_min", "detector.grid_max", "detector.grid_step",
        "detector.calib_sims", "detector.calib_trials", "detector.calib_steps",
    };
    for (const auto& [key, value] : raw) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("config: unknown key '" + key + "'");
    }

    if (cfg.d.size() != cfg.horizon || cfg.gamma.size() != cfg.horizon)
        throw ConfigError("config: design profiles must match the horizon");
}

std::string write_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[system]\n";
    out << "f = " << fmt_mat(cfg.f) << "\n";
    out << "g = " << fmt_mat(cfg.g) << "\n";
    out << "h = " << fmt_mat(cfg.h) << "\n";
    out << "r = " << fmt_mat(cfg.r) << "\n";
    out << "q = " << fmt_mat(cfg.q) << "\n";
    out << "\n[scenario]\n";
    out << "x0 = " << fmt_vec(cfg.x0) << "\n";
    out << "x0_from_clean = " << (cfg.x0_from_clean ? "true" : "false") << "\n";
    out << "u = " << fmt_vec(cfg.u) << "\n";
    out << "steps = " << cfg.steps << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "\n[clean_prior]\n";
    out << "mean = " << fmt_vec(cfg.clean_mean) << "\n";
    out << "cov = " << fmt_mat(cfg.clean_cov) << "\n";
    out << "mean_spread = " << fmt_double(cfg.clean_mean_spread) << "\n";
    out << "\n[spoofed_prior]\n";
    out << "mean = " << fmt_vec(cfg.spoofed_mean) << "\n";
    out << "cov = " << fmt_mat(cfg.spoofed_cov) << "\n";
    out << "\n[attacker_guess]\n";
    out << "mean = " << fmt_vec(cfg.guess_mean) << "\n";
    out << "cov = " << fmt_mat(cfg.guess_cov) << "\n";
    out << "\n[design]\n";
    out << "horizon = " << cfg.horizon << "\n";
    out << "d = " << profile_text(cfg.d) << "\n";
    out << "gamma = " << weights_text(cfg.gamma) << "\n";
    out << "norm_p = " << cfg.norm_p << "\n";
    out << "m0_bias = " << fmt_vec(cfg.m0_bias) << "\n";
    out << "\n[online]\n";
    out << "window = " << cfg.window << "\n";
    out << "\n[detector]\n";
    out << "enabled = " << (cfg.det_enabled ? "true" : "false") << "\n";
    out << "form = " << to_string(cfg.det_form) << "\n";
    out << "threshold = " << fmt_double(cfg.det_threshold) << "\n";
    out << "target = " << fmt_double(cfg.det_target) << "\n";
    out << "metric = " << to_string(cfg.det_metric) << "\n";
    out << "grid_min = " << fmt_double(cfg.grid_min) << "\n";
    out << "grid_max = " << fmt_double(cfg.grid_max) << "\n";
    out << "grid_step = " << fmt_double(cfg.grid_step) << "\n";
    out << "calib_sims = " << cfg.calib_sims << "\n";
    out << "calib_trials = " << cfg.calib_trials << "\n";
    out << "calib_steps = " << cfg.calib_steps << "\n";
    return out.str();
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    parse_config(buf.str(), base);
    return base;
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg; // base: identity dynamics, R = Q = 0.5 I
    const double ramp = 0.25 * std::sqrt(2.0);
    if (name == "fig3a") {
        cfg.d[4] = 1.77;
        cfg.d[9] = 3.54;
        cfg.d[14] = 5.30;
        return cfg;
    }
    if (name == "fig3b") {
        cfg.steps = 15;
        cfg.horizon = 15;
        cfg.d.assign(15, 0.0);
        cfg.gamma.assign(15, 1.0);
        for (std::size_t t = 3; t <= 15; ++t) cfg.d[t - 1] = ramp * static_cast<double>(t);
        return cfg;
    }
    if (name == "fig4") {
        cfg.steps = 6;
        cfg.horizon = 6;
        cfg.d.assign(6, 0.0);
        cfg.gamma.assign(6, 1.0);
        cfg.d[0] = 2.0;
        cfg.clean_mean = Vec{1.0, 1.0};
        cfg.clean_mean_spread = 1.0;
        cfg.guess_mean = Vec{1.0, 1.0};
        cfg.spoofed_cov = Mat::scaled_identity(2, 1.5);
        cfg.m0_bias = Vec{1.0, 1.0};
        cfg.x0_from_clean = true;
        return cfg;
    }
    if (name == "fig5" || name == "fig6") {
        cfg.steps = 20;
        cfg.horizon = 20;
        cfg.d.assign(20, 0.0);
        cfg.gamma.assign(20, 1.0);
        for (std::size_t t = 3; t <= 15; ++t) cfg.d[t - 1] = ramp * static_cast<double>(t);
        cfg.clean_mean = Vec{1.0, 1.0};
        cfg.clean_mean_spread = 1.0;
        cfg.guess_mean = Vec{1.0, 1.0};
        cfg.spoofed_cov = Mat::scaled_identity(2, 1.5);
        cfg.m0_bias = Vec{1.0, 1.0};
        cfg.x0_from_clean = true;
        cfg.window = 15;
        cfg.trials = name == "fig6" ? 100 : 1;
        return cfg;
    }
    if (name == "fig7") {
        cfg.det_enabled = true;
        cfg.x0_from_clean = true;
        return cfg;
    }
    if (name == "fig8") {
        cfg.det_enabled = true;
        cfg.x0_from_clean = true;
        cfg.horizon = 15;
        cfg.steps = 18; // plan horizon plus settle steps for the stop transient
        cfg.d.assign(15, 0.0);
        cfg.gamma.assign(15, 1.0);
        for (std::size_t t = 1; t <= 15; ++t) cfg.d[t - 1] = 0.2 * static_cast<double>(t);
        cfg.trials = 1000;
        return cfg;
    }
    if (name == "fig9") {
        cfg.det_enabled = true;
        cfg.x0_from_clean = true;
        cfg.horizon = 30;
        cfg.steps = 33;
        cfg.d.assign(30, 0.0);
        cfg.gamma.assign(30, 1.0);
        for (std::size_t t = 1; t <= 30; ++t) cfg.d[t - 1] = 0.1 * static_cast<double>(t);
        cfg.trials = 1000;
        return cfg;
    }
    throw ConfigError("unknown preset '" + name + "'; known: fig3a fig3b fig4 fig5 fig6 fig7 fig8 fig9");
}

std::vector<std::string> preset_names() {
    return {"fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

LinearSystem to_linear_system(const ExperimentConfig& cfg) {
    LinearSystem sys{cfg.f, cfg.g, cfg.h, cfg.r, cfg.q};
    sys.validate();
    return sys;
}

Scenario to_scenario(const ExperimentConfig& cfg) {
    Scenario scn;
    scn.sys = to_linear_system(cfg);
    scn.x0 = cfg.x0;
    scn.x0_from_clean = cfg.x0_from_clean;
    scn.u = cfg.u;
    scn.clean_prior = {cfg.clean_mean, cfg.clean_cov};
    scn.clean_mean_spread = cfg.clean_mean_spread;
    scn.spoofed_prior = {cfg.spoofed_mean, cfg.spoofed_cov};
    scn.attacker_guess = {cfg.guess_mean, cfg.guess_cov};
    scn.steps = cfg.steps;
    scn.seed = cfg.seed;
    return scn;
}

SpoofSpec to_spoof_spec(const ExperimentConfig& cfg) {
    SpoofSpec spec;
    spec.horizon = cfg.horizon;
    spec.d = cfg.d;
    spec.gamma = cfg.gamma;
    spec.norm_p = cfg.norm_p;
    spec.m0_bias = cfg.m0_bias;
    return spec;
}

DetectorConfig to_detector_config(const ExperimentConfig& cfg) {
    return DetectorConfig{cfg.det_form, cfg.det_threshold};
}

OnlineOptions to_online_options(const ExperimentConfig& cfg) {
    OnlineOptions opts;
    opts.window = cfg.window;
    opts.d_profile = cfg.d;
    opts.norm_p = cfg.norm_p;
    return opts;
}

CalibrationParams to_calibration_params(const ExperimentConfig& cfg) {
    CalibrationParams params;
    params.scenario = to_scenario(cfg);
    params.scenario.steps = cfg.calib_steps;
    params.form = cfg.det_form;
    params.metric = cfg.det_metric;
    params.target = cfg.det_target;
    params.n_sims = cfg.calib_sims;
    params.trials_per_sim = cfg.calib_trials;
    params.grid_min = cfg.grid_min;
    params.grid_max = cfg.grid_max;
    params.grid_step = cfg.grid_step;
    return params;
}

} // namespace spoofkit
