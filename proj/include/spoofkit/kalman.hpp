#pragma once

#include <cstdint>
#include <vector>

#include "spoofkit/linalg.hpp"

namespace spoofkit {

// Discrete-time linear system
//   x_{t} = F x_{t-1} + G u_{t-1} + w_t,   w_t ~ N(0, R)
//   z_{t} = H x_t + v_t,                   v_t ~ N(0, Q)
// R is the process noise covariance and Q the measurement noise covariance.
struct LinearSystem {
    Mat f;
    Mat g;
    Mat h;
    Mat r;
    Mat q;

    std::size_t state_dim() const { return f.rows; }
    std::size_t meas_dim() const { return h.rows; }

    // Throws DimensionError unless all blocks are mutually consistent and finite.
    void validate() const;
};

struct GaussianBelief {
    Vec mean;
    Mat cov;
};

// Measurement-independent Riccati recursion outputs for steps 1..horizon.
// Index 0 of each vector corresponds to step t = 1.
struct GainSchedule {
    std::vector<Mat> gains;      // K_t
    std::vector<Mat> prior_covs; // Sigma_{t|t-1}
    std::vector<Mat> post_covs;  // Sigma_{t|t}
    std::vector<Mat> innov_covs; // S_t = H Sigma_{t|t-1} H^T + Q

    std::size_t horizon() const { return gains.size(); }
};

// Runs the covariance/gain recursion from Sigma_0 for `horizon` steps:
//   Sigma_{t|t-1} = F Sigma_{t-1|t-1} F^T + R
//   S_t           = H Sigma_{t|t-1} H^T + Q
//   K_t           = Sigma_{t|t-1} H^T S_t^{-1}
//   Sigma_{t|t}   = (I - K_t H) Sigma_{t|t-1}
// Covariances are re-symmetrized after each product. Throws SingularMatrixError
// when an innovation covariance is not invertible.
GainSchedule build_gain_schedule(const LinearSystem& sys, const Mat& sigma0, std::size_t horizon);

// Mean/covariance propagation through the dynamics: m <- F m + G u, Sigma <- F Sigma F^T + R.
GaussianBelief predict(const LinearSystem& sys, const GaussianBelief& belief, const Vec& u);

// Measurement update with an externally supplied gain:
//   m <- m + K (z - H m), Sigma <- (I - K H) Sigma.
GaussianBelief update(const LinearSystem& sys, const GaussianBelief& belief, const Vec& z, const Mat& gain);

// One-step gain from a prior covariance: K = Sigma H^T (H Sigma H^T + Q)^{-1}.
Mat gain_from_prior_cov(const LinearSystem& sys, const Mat& prior_cov);

// Full filter pass over a measurement sequence; returns posterior beliefs for
// steps 1..n in order. controls[t-1] and measurements[t-1] feed step t.
std::vector<GaussianBelief> run_filter(const LinearSystem& sys, const GaussianBelief& init,
                                       const std::vector<Vec>& controls, const std::vector<Vec>& measurements);

bool schedules_equal(const GainSchedule& a, const GainSchedule& b);

} // namespace spoofkit
