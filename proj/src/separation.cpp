#include "spoofkit/separation.hpp"

#include <string>

#include "spoofkit/errors.hpp"

namespace spoofkit {

SeparationTerms build_terms(const LinearSystem& sys, const GainSchedule& clean, const GainSchedule& spoofed,
                            const std::vector<Vec>* measurements, const std::vector<Vec>* clean_means,
                            const std::vector<Vec>* controls) {
    if (clean.horizon() != spoofed.horizon())
        throw DimensionError("build_terms: gain schedules cover different horizons");
    const int given = (measurements != nullptr) + (clean_means != nullptr) + (controls != nullptr);
    if (given != 0 && given != 3)
        throw DimensionError("build_terms: measurement, mean and control inputs must be all present or all absent");
    const std::size_t horizon = spoofed.horizon();
    SeparationTerms terms;
    terms.a_mats.reserve(horizon);
    terms.c_gains.reserve(horizon);
    for (std::size_t t = 1; t <= horizon; ++t) {
        const Mat& kt = spoofed.gains[t - 1];
        terms.a_mats.push_back(sys.f - kt * sys.h * sys.f);
        terms.c_gains.push_back(kt);
    }
    if (given == 3) {
        if (measurements->size() < horizon || clean_means->size() < horizon || controls->size() < horizon)
            throw DimensionError("build_terms: B inputs shorter than the schedule horizon");
        terms.b_vecs.reserve(horizon);
        for (std::size_t t = 1; t <= horizon; ++t) {
            // clean_means[t-1] is the posterior mean after step t-1 (index 0 = initial).
            const Vec pred = sys.f * (*clean_means)[t - 1] + sys.g * (*controls)[t - 1];
            const Vec innov = (*measurements)[t - 1] - sys.h * pred;
            terms.b_vecs.push_back((clean.gains[t - 1] - spoofed.gains[t - 1]) * innov);
        }
    }
    return terms;
}

Vec closed_form_separation(const SeparationTerms& terms, const Vec& init_diff, const std::vector<Vec>& eps,
                           std::size_t t) {
    if (t > terms.horizon())
        throw DimensionError("closed_form_separation: step " + std::to_string(t) + " beyond horizon");
    const std::size_t n = init_diff.dim();
    // prefix[s] = A_t A_{t-1} ... A_{s+1}; built backwards from prefix[t] = I.
    std::vector<Mat> prefix(t + 1);
    prefix[t] = Mat::identity(n);
    for (std::size_t s = t; s >= 1; --s) prefix[s - 1] = prefix[s] * terms.a_mats[s - 1];
    Vec out = prefix[0] * init_diff;
    for (std::size_t s = 1; s <= t; ++s) {
        Vec term = Vec::zeros(n);
        if (s - 1 < eps.size() && eps[s - 1].dim() != 0) term = term - terms.c_gains[s - 1] * eps[s - 1];
        if (!terms.b_vecs.empty()) term = term + terms.b_vecs[s - 1];
        out = out + prefix[s] * term;
    }
    return out;
}

Vec expected_separation(const SeparationTerms& terms, const Vec& init_diff, const std::vector<Vec>& eps,
                        std::size_t t) {
    SeparationTerms no_b;
    no_b.a_mats = terms.a_mats;
    no_b.c_gains = terms.c_gains;
    return closed_form_separation(no_b, init_diff, eps, t);
}

CoeffTable build_coeff_table(const SeparationTerms& terms) {
    CoeffTable table;
    table.horizon = terms.horizon();
    table.dim = table.horizon ? terms.a_mats[0].rows : 0;
    table.phi.resize(table.horizon);
    table.bias_prefix.resize(table.horizon + 1);
    table.bias_prefix[0] = Mat::identity(table.dim);
    for (std::size_t t = 1; t <= table.horizon; ++t) {
        table.phi[t - 1].resize(t);
        for (std::size_t i = 1; i < t; ++i) table.phi[t - 1][i - 1] = terms.a_mats[t - 1] * table.phi[t - 2][i - 1];
        table.phi[t - 1][t - 1] = -1.0 * terms.c_gains[t - 1];
        table.bias_prefix[t] = terms.a_mats[t - 1] * table.bias_prefix[t - 1];
    }
    return table;
}

ConstraintSystem build_constraint_matrix(const CoeffTable& table, const std::vector<double>& d_profile,
                                         const Vec& m0_bias) {
    if (d_profile.size() != table.horizon)
        throw DimensionError("build_constraint_matrix: profile length must equal the table horizon");
    if (m0_bias.dim() != table.dim)
        throw DimensionError("build_constraint_matrix: initial bias dimension mismatch");
    ConstraintSystem cs;
    cs.horizon = table.horizon;
    cs.dim = table.dim;
    for (std::size_t t = 1; t <= table.horizon; ++t)
        if (d_profile[t - 1] != 0.0) cs.steps.push_back(t);
    if (cs.steps.empty()) throw InfeasibleDesignError("no constraints: every desired separation is zero");

    cs.g = Mat::zeros(cs.steps.size(), table.dim * table.horizon);
    cs.d.assign(cs.steps.size(), 0.0);
    cs.v0.assign(cs.steps.size(), Vec::zeros(table.dim));
    cs.component_rows.assign(cs.steps.size(), Mat::zeros(table.dim, table.dim * table.horizon));
    for (std::size_t q = 0; q < cs.steps.size(); ++q) {
        const std::size_t t = cs.steps[q];
        cs.d[q] = d_profile[t - 1];
        cs.v0[q] = table.bias_prefix[t] * m0_bias;
        for (std::size_t i = 1; i <= t; ++i) {
            const Mat& phi = table.at(t, i);
            for (std::size_t c = 0; c < table.dim; ++c) {
                const std::size_t col = c * table.horizon + (i - 1);
                double col_sum = 0.0;
                for (std::size_t r = 0; r < table.dim; ++r) {
                    cs.component_rows[q].at(r, col) = phi.at(r, c);
                    col_sum += phi.at(r, c);
                }
                cs.g.at(q, col) = col_sum;
            }
        }
    }
    return cs;
}

bool check_lemma1(const LinearSystem& sys, const GainSchedule& spoofed) {
    const auto nonneg_pos_diag = [](const Mat& m) {
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) {
                if (m.at(i, j) < 0.0) return false;
                if (i == j && m.at(i, j) <= 0.0) return false;
            }
        return true;
    };
    const auto nonneg = [](const Mat& m) {
        for (double x : m.e)
            if (x < 0.0) return false;
        return true;
    };
    if (!nonneg_pos_diag(sys.f)) return false;
    const Mat eye = Mat::identity(sys.state_dim());
    for (const Mat& k : spoofed.gains) {
        if (!nonneg(k)) return false;
        if (!nonneg_pos_diag(eye - k * sys.h)) return false;
    }
    return true;
}

} // namespace spoofkit
