#pragma once

#include <string>
#include <vector>

#include "spoofkit/detector_experiments.hpp"
#include "spoofkit/sim.hpp"
#include "spoofkit/spoof_design.hpp"

namespace spoofkit {

// Columns: t,x1,x2,z1,z2,eps1,eps2,m1,m2,mt1,mt2,sep_l1,d_t,g_k,alarm.
// Doubles are printed with enough digits to parse back exactly.
void write_runs_csv(const std::string& path, const RunRecord& rec);
RunRecord read_runs_csv(const std::string& path);

// Columns: t,eps1,eps2.
void write_plans_csv(const std::string& path, const SpoofPlan& plan);
std::vector<Vec> read_plans_csv(const std::string& path);

// Columns: threshold,rate_mean,rate_min,rate_max.
void write_calibration_csv(const std::string& path, const std::vector<CalibrationPoint>& curve);
std::vector<CalibrationPoint> read_calibration_csv(const std::string& path);

struct SvgSeries {
    std::string name;
    std::vector<double> values; // y at x = 1..n
};

// Small self-contained line chart; one polyline per series plus axes and a
// legend.
void write_series_svg(const std::string& path, const std::string& title, const std::vector<SvgSeries>& series);

} // namespace spoofkit
