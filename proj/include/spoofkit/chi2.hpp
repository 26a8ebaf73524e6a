#pragma once

#include <cstdint>
#include <string>

#include "spoofkit/kalman.hpp"
#include "spoofkit/linalg.hpp"

namespace spoofkit {

// Two test statistics over the filter's measurement residual.
//
// paper_literal weights the posterior residual by the posterior covariance
// itself, g = (z - H m)^T Sigma (z - H m); it needs meas_dim == state_dim and
// its scale shrinks with the covariance.
//
// normalized_innovation is the standard form g = nu^T S^{-1} nu with
// nu = z - H m_prior and S = H Sigma_prior H^T + Q; without an attack it is
// chi-squared with meas_dim degrees of freedom.
enum class DetectorForm { paper_literal, normalized_innovation };

std::string to_string(DetectorForm f);

struct DetectorConfig {
    DetectorForm form = DetectorForm::normalized_innovation;
    double threshold = 0.0; // alarm when g > threshold
};

double detector_statistic(DetectorForm form, const LinearSystem& sys, const GaussianBelief& prior,
                          const GaussianBelief& post, const Vec& z);

// Exact upper tail P(X >= x) for X ~ Binomial(n, p0), summed in log space so
// tails far below double range still come out correct. x = 0 returns 1.
double binom_pvalue(std::uint64_t x, std::uint64_t n, double p0);

// CDF of the chi-squared distribution with 2 degrees of freedom.
double chi2_cdf_2dof(double x);

} // namespace spoofkit
