#pragma once

#include <optional>
#include <vector>

#include "spoofkit/kalman.hpp"
#include "spoofkit/linalg.hpp"

namespace spoofkit {

// Terms of the clean-vs-spoofed estimate difference recursion
//   diff_t = A_t diff_{t-1} + B_t + C_t
// where, with K_t the clean gain and Kt_t the spoofed-filter gain,
//   A_t = F - Kt_t H F
//   B_t = (K_t - Kt_t) (z_t - H (F m_{t-1} + G u_{t-1}))   [zero in expectation]
//   C_t = -Kt_t eps_t.
// Index 0 of each vector corresponds to step t = 1.
struct SeparationTerms {
    std::vector<Mat> a_mats;
    std::vector<Mat> c_gains;          // Kt_t, so C_t = -c_gains[t-1] * eps_t
    std::vector<Vec> b_vecs;           // empty when measurement inputs were not supplied
    std::size_t horizon() const { return a_mats.size(); }
};

// Builds A/C (and B when clean measurements are given) from the two gain
// schedules. For B, `clean_means` must hold the clean posterior means with the
// initial mean at index 0, and `controls`/`measurements` feed steps 1..T.
// The three B inputs must be all present or all absent.
SeparationTerms build_terms(const LinearSystem& sys, const GainSchedule& clean, const GainSchedule& spoofed,
                            const std::vector<Vec>* measurements = nullptr,
                            const std::vector<Vec>* clean_means = nullptr,
                            const std::vector<Vec>* controls = nullptr);

// Estimate difference at step t via the explicit product-sum form:
//   diff_t = (prod_{j=1..t} A_j) diff_0 + sum_{s=1..t} (A_t ... A_{s+1}) (B_s + C_s)
// with B omitted when `terms` has no B vectors. `eps[s-1]` is the spoof input
// at step s; pass an empty vector for an unattacked run.
Vec closed_form_separation(const SeparationTerms& terms, const Vec& init_diff, const std::vector<Vec>& eps,
                           std::size_t t);

// Expected difference at step t: drops B, keeps the initial-bias decay and the
// spoof-input response. init_diff here is the expected initial bias M_0.
Vec expected_separation(const SeparationTerms& terms, const Vec& init_diff, const std::vector<Vec>& eps,
                        std::size_t t);

// phi(t, i) = A_t A_{t-1} ... A_{i+1} (-Kt_i): the sensitivity of diff_t to
// eps_i, for 1 <= i <= t <= horizon. Built by phi(t, i) = A_t phi(t-1, i).
struct CoeffTable {
    std::size_t horizon = 0;
    std::size_t dim = 0;
    // Indexed [t-1][i-1], entries valid for i <= t.
    std::vector<std::vector<Mat>> phi;
    // bias_prefix[t] = A_t A_{t-1} ... A_1 (bias_prefix[0] = I); decay of the
    // initial estimate difference.
    std::vector<Mat> bias_prefix;

    const Mat& at(std::size_t t, std::size_t i) const { return phi[t - 1][i - 1]; }
};

CoeffTable build_coeff_table(const SeparationTerms& terms);

// Linear constraint data for the separation-profile design problem, over the
// stacked variable x = [eps_{1,1}..eps_{T,1}, eps_{1,2}..eps_{T,2}]^T:
// component c of eps_i sits at column (c * T) + (i - 1).
//
// For each step t with a nonzero desired separation, row q holds the column
// sums of phi(t, i) (signed), the desired value d[q], and the decayed initial
// bias v0[q] = (prod_{j=1..t} A_j) M_0.
struct ConstraintSystem {
    std::size_t horizon = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> steps; // constrained steps t_q, ascending
    Mat g;                          // steps.size() x (dim * horizon), column sums over components
    std::vector<double> d;
    std::vector<Vec> v0;
    // Per-component rows: component_rows[q].at(c, col) is the coefficient of
    // variable `col` in component c of the separation at step steps[q]; g is
    // the column-wise sum of these rows.
    std::vector<Mat> component_rows;
};

// d_profile[t-1] is the desired separation at step t; zeros are unconstrained.
// Throws InfeasibleDesignError("no constraints") if every entry is zero.
ConstraintSystem build_constraint_matrix(const CoeffTable& table, const std::vector<double>& d_profile,
                                         const Vec& m0_bias);

// True when F is entrywise nonnegative with strictly positive diagonal and
// every I - Kt_t H and Kt_t are entrywise nonnegative with positive diagonal.
// Under this condition all phi entries share one sign per component and the
// L1-optimal design needs a single LP.
bool check_lemma1(const LinearSystem& sys, const GainSchedule& spoofed);

} // namespace spoofkit
