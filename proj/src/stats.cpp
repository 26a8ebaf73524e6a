#include "spoofkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spoofkit/chi2.hpp"
#include "spoofkit/errors.hpp"

namespace spoofkit {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw DimensionError("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double bootstrap_mean_quantile(const std::vector<double>& xs, double q, std::size_t resamples, std::uint64_t seed) {
    if (xs.empty()) throw DimensionError("bootstrap_mean_quantile: empty sample");
    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<double> means;
    means.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) s += xs[pick(engine)];
        means.push_back(s / static_cast<double>(xs.size()));
    }
    std::sort(means.begin(), means.end());
    const double pos = q * static_cast<double>(means.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] * (1.0 - frac) + means[hi] * frac;
}

double ks_distance_chi2_2dof(std::vector<double> samples) {
    if (samples.empty()) throw DimensionError("ks_distance_chi2_2dof: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = chi2_cdf_2dof(samples[i]);
        const double above = static_cast<double>(i + 1) / n - cdf;
        const double below = cdf - static_cast<double>(i) / n;
        d = std::max(d, std::max(above, below));
    }
    return d;
}

} // namespace spoofkit
