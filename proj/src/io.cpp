#include "spoofkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spoofkit/errors.hpp"

namespace spoofkit {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
    if (line != expected_header)
        throw ConfigError("'" + path + "' has header '" + line + "', expected '" + expected_header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

double to_double(const std::string& s) { return std::stod(s); }

} // namespace

void write_runs_csv(const std::string& path, const RunRecord& rec) {
    auto out = open_out(path);
    out << "t,x1,x2,z1,z2,eps1,eps2,m1,m2,mt1,mt2,sep_l1,d_t,g_k,alarm\n";
    for (const StepRecord& s : rec.steps) {
        out << s.t << ',' << fmt(s.x[0]) << ',' << fmt(s.x[1]) << ',' << fmt(s.z[0]) << ',' << fmt(s.z[1]) << ','
            << fmt(s.eps[0]) << ',' << fmt(s.eps[1]) << ',' << fmt(s.m_clean[0]) << ',' << fmt(s.m_clean[1]) << ','
            << fmt(s.m_spoof[0]) << ',' << fmt(s.m_spoof[1]) << ',' << fmt(s.sep_l1) << ',' << fmt(s.d_t) << ','
            << fmt(s.g) << ',' << (s.alarm ? 1 : 0) << '\n';
    }
}

RunRecord read_runs_csv(const std::string& path) {
    const auto rows = read_csv(path, "t,x1,x2,z1,z2,eps1,eps2,m1,m2,mt1,mt2,sep_l1,d_t,g_k,alarm");
    RunRecord rec;
    for (const auto& f : rows) {
        if (f.size() != 15) throw ConfigError("'" + path + "': row with " + std::to_string(f.size()) + " fields");
        StepRecord s;
        s.t = static_cast<std::size_t>(std::stoull(f[0]));
        s.x = Vec{to_double(f[1]), to_double(f[2])};
        s.z = Vec{to_double(f[3]), to_double(f[4])};
        s.eps = Vec{to_double(f[5]), to_double(f[6])};
        s.m_clean = Vec{to_double(f[7]), to_double(f[8])};
        s.m_spoof = Vec{to_double(f[9]), to_double(f[10])};
        s.sep_l1 = to_double(f[11]);
        s.d_t = to_double(f[12]);
        s.g = to_double(f[13]);
        s.alarm = f[14] == "1";
        rec.energy_l1 += l1_norm(s.eps);
        rec.detected = rec.detected || s.alarm;
        rec.steps.push_back(std::move(s));
    }
    return rec;
}

void write_plans_csv(const std::string& path, const SpoofPlan& plan) {
    auto out = open_out(path);
    out << "t,eps1,eps2\n";
    for (std::size_t t = 1; t <= plan.epsilons.size(); ++t)
        out << t << ',' << fmt(plan.epsilons[t - 1][0]) << ',' << fmt(plan.epsilons[t - 1][1]) << '\n';
}

std::vector<Vec> read_plans_csv(const std::string& path) {
    const auto rows = read_csv(path, "t,eps1,eps2");
    std::vector<Vec> eps;
    for (const auto& f : rows) {
        if (f.size() != 3) throw ConfigError("'" + path + "': row with " + std::to_string(f.size()) + " fields");
        eps.push_back(Vec{to_double(f[1]), to_double(f[2])});
    }
    return eps;
}

void write_calibration_csv(const std::string& path, const std::vector<CalibrationPoint>& curve) {
    auto out = open_out(path);
    out << "threshold,rate_mean,rate_min,rate_max\n";
    for (const CalibrationPoint& p : curve)
        out << fmt(p.threshold) << ',' << fmt(p.rate_mean) << ',' << fmt(p.rate_min) << ',' << fmt(p.rate_max)
            << '\n';
}

std::vector<CalibrationPoint> read_calibration_csv(const std::string& path) {
    const auto rows = read_csv(path, "threshold,rate_mean,rate_min,rate_max");
    std::vector<CalibrationPoint> curve;
    for (const auto& f : rows) {
        if (f.size() != 4) throw ConfigError("'" + path + "': row with " + std::to_string(f.size()) + " fields");
        curve.push_back({to_double(f[0]), to_double(f[1]), to_double(f[2]), to_double(f[3])});
    }
    return curve;
}

void write_series_svg(const std::string& path, const std::string& title, const std::vector<SvgSeries>& series) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    const double width = 720, height = 420;
    const double ml = 56, mr = 16, mt = 40, mb = 36;
    std::size_t n = 0;
    double ymin = 0.0, ymax = 1e-9;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (n < 2) n = 2;
    const double span = std::max(ymax - ymin, 1e-9);
    const auto px = [&](std::size_t i) {
        return ml + (width - ml - mr) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    const auto py = [&](double v) { return height - mb - (height - mt - mb) * (v - ymin) / span; };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << title << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymin) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(ymin) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymax) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(ymax) << "</text>\n";
    out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 26
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">step " << n << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) out << px(i) << ',' << py(s.values[i]) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 * static_cast<double>(k)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
            << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace spoofkit
