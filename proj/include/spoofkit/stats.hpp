#pragma once

#include <cstdint>
#include <vector>

namespace spoofkit {

// q-quantile (0..1) of the bootstrap distribution of the sample mean,
// `resamples` draws with replacement, deterministic for a fixed seed.
double bootstrap_mean_quantile(const std::vector<double>& xs, double q, std::size_t resamples, std::uint64_t seed);

// Two-sided Kolmogorov-Smirnov distance between the sample and the
// chi-squared(2) distribution.
double ks_distance_chi2_2dof(std::vector<double> samples);

double mean(const std::vector<double>& xs);

} // namespace spoofkit
