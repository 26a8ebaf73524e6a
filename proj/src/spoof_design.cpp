#include "spoofkit/spoof_design.hpp"

#include <cmath>
#include <limits>

#include "spoofkit/errors.hpp"
#include "spoofkit/lp.hpp"

namespace spoofkit {

namespace {

constexpr std::uint64_t kEnumerationCap = 65536; // total LP solves
constexpr double kMarginTol = 1e-6;

// Cost vector gamma_i for every component of eps_i, matching the stacked
// variable layout of ConstraintSystem.
Vec expand_gamma(const SpoofSpec& spec, std::size_t dim) {
    Vec c(dim * spec.horizon);
    for (std::size_t comp = 0; comp < dim; ++comp)
        for (std::size_t i = 0; i < spec.horizon; ++i) c[comp * spec.horizon + i] = spec.gamma[i];
    return c;
}

std::vector<Vec> unstack(const Vec& x, std::size_t horizon, std::size_t dim) {
    std::vector<Vec> eps(horizon, Vec::zeros(dim));
    for (std::size_t i = 0; i < horizon; ++i)
        for (std::size_t c = 0; c < dim; ++c) eps[i][c] = x[c * horizon + i];
    return eps;
}

double plan_energy(const SpoofSpec& spec, const std::vector<Vec>& eps) {
    double total = 0.0;
    for (std::size_t i = 0; i < spec.horizon; ++i) {
        const double e = spec.norm_p == 1 ? l1_norm(eps[i]) : l2_norm_sq(eps[i]);
        total += spec.gamma[i] * e;
    }
    return total;
}

std::vector<double> achieved_norms(const DesignInputs& in, const SpoofSpec& spec, const std::vector<Vec>& eps) {
    std::vector<double> out;
    out.reserve(in.cs.steps.size());
    for (const std::size_t t : in.cs.steps) {
        const Vec sep = expected_separation(in.terms, spec.m0_bias, eps, t);
        out.push_back(spec.norm_p == 1 ? l1_norm(sep) : std::sqrt(l2_norm_sq(sep)));
    }
    return out;
}

bool sign_uniform_nonpositive(const Mat& g) {
    for (double x : g.e)
        if (x > 1e-12) return false;
    return true;
}

// Single LP oriented along the regime orthant: every component of the
// separation is pushed negative, so the L1 norm equals the negated component
// sum and the constraint rows become |column sums| with rhs d + sum(v0).
SpoofPlan solve_aligned_lp(const DesignInputs& in, const SpoofSpec& spec) {
    const std::size_t ncols = in.cs.dim * in.cs.horizon;
    LpProblem lp;
    lp.c = expand_gamma(spec, in.cs.dim);
    lp.a = Mat::zeros(in.cs.steps.size(), ncols);
    lp.b = Vec::zeros(in.cs.steps.size());
    for (std::size_t q = 0; q < in.cs.steps.size(); ++q) {
        for (std::size_t j = 0; j < ncols; ++j) lp.a.at(q, j) = std::fabs(in.cs.g.at(q, j));
        double bias_sum = 0.0;
        for (std::size_t c = 0; c < in.cs.dim; ++c) bias_sum += in.cs.v0[q][c];
        lp.b[q] = in.cs.d[q] + bias_sum;
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw InfeasibleDesignError("design_l1: aligned LP " +
                                    std::string(sol.status == LpStatus::infeasible ? "infeasible" : "unbounded"));
    SpoofPlan plan;
    plan.epsilons = unstack(sol.x, spec.horizon, in.cs.dim);
    plan.method = PlanMethod::single_lp;
    plan.lp_count = 1;
    plan.objective = plan_energy(spec, plan.epsilons);
    plan.achieved = achieved_norms(in, spec, plan.epsilons);
    return plan;
}

// One LP per sign assignment: constraint q with signs s demands
//   s . (v0_q + Phi_q eps) >= d_q,
// which certifies ||v0_q + Phi_q eps||_1 >= d_q whatever the realized signs.
SpoofPlan solve_sign_enumeration(const DesignInputs& in, const SpoofSpec& spec) {
    const std::size_t k = in.cs.steps.size();
    const std::size_t dim = in.cs.dim;
    const std::size_t npat = std::size_t{1} << dim;
    std::uint64_t total = 1;
    for (std::size_t q = 0; q < k; ++q) {
        total *= npat;
        if (total > kEnumerationCap)
            throw EnumerationCapError("design_l1: " + std::to_string(k) + " constraints need more than " +
                                      std::to_string(kEnumerationCap) +
                                      " LP solves; reduce the active constraints or use a sign-uniform system");
    }

    const std::size_t ncols = dim * in.cs.horizon;
    const Vec gamma_cols = expand_gamma(spec, dim);
    LpProblem lp;
    lp.c = Vec::zeros(2 * ncols);
    for (std::size_t j = 0; j < ncols; ++j) lp.c[j] = lp.c[ncols + j] = gamma_cols[j];
    lp.a = Mat::zeros(k, 2 * ncols);
    lp.b = Vec::zeros(k);

    SpoofPlan best;
    bool found = false;
    double best_obj = std::numeric_limits<double>::infinity();
    std::uint64_t solved = 0;
    std::vector<double> signs(dim);
    for (std::uint64_t assign = 0; assign < total; ++assign) {
        // Constraint 0 is the most significant base-npat digit; within one
        // constraint, bit c set means component c takes the minus sign.
        std::uint64_t rem = assign;
        for (std::size_t q = k; q-- > 0;) {
            const std::size_t pat = static_cast<std::size_t>(rem % npat);
            rem /= npat;
            for (std::size_t c = 0; c < dim; ++c) signs[c] = (pat >> (dim - 1 - c)) & 1 ? -1.0 : 1.0;
            double rhs = in.cs.d[q];
            for (std::size_t c = 0; c < dim; ++c) rhs -= signs[c] * in.cs.v0[q][c];
            lp.b[q] = rhs;
            for (std::size_t j = 0; j < ncols; ++j) {
                double coeff = 0.0;
                for (std::size_t c = 0; c < dim; ++c) coeff += signs[c] * in.cs.component_rows[q].at(c, j);
                lp.a.at(q, j) = coeff;
                lp.a.at(q, ncols + j) = -coeff;
            }
        }
        const LpSolution sol = solve_lp(lp);
        ++solved;
        if (sol.status != LpStatus::optimal) continue;
        if (sol.objective < best_obj - 1e-12) {
            best_obj = sol.objective;
            found = true;
            best.epsilons.assign(spec.horizon, Vec::zeros(dim));
            for (std::size_t i = 0; i < spec.horizon; ++i)
                for (std::size_t c = 0; c < dim; ++c) {
                    const std::size_t j = c * spec.horizon + i;
                    best.epsilons[i][c] = sol.x[j] - sol.x[ncols + j];
                }
        }
    }
    if (!found) throw InfeasibleDesignError("design_l1: every sign assignment is infeasible");
    best.method = PlanMethod::sign_enum;
    best.lp_count = solved;
    best.objective = plan_energy(spec, best.epsilons);
    best.achieved = achieved_norms(in, spec, best.epsilons);
    return best;
}

bool diagonal(const Mat& m) {
    if (m.rows != m.cols) return false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (i != j && m.at(i, j) != 0.0) return false;
    return true;
}

} // namespace

void SpoofSpec::validate(std::size_t dim) const {
    if (d.size() != horizon) throw DimensionError("spoof spec: profile length must equal the horizon");
    if (gamma.size() != horizon) throw DimensionError("spoof spec: gamma length must equal the horizon");
    if (norm_p != 1 && norm_p != 2) throw DimensionError("spoof spec: norm_p must be 1 or 2");
    if (m0_bias.dim() != dim) throw DimensionError("spoof spec: initial bias dimension mismatch");
    bool any = false;
    for (double v : d) {
        if (v < 0.0) throw DimensionError("spoof spec: desired separations must be nonnegative");
        if (v > 0.0) any = true;
    }
    if (!any) throw InfeasibleDesignError("no constraints: every desired separation is zero");
    for (double gval : gamma)
        if (gval <= 0.0) throw DimensionError("spoof spec: gamma weights must be positive");
}

std::string to_string(PlanMethod m) {
    switch (m) {
    case PlanMethod::single_lp: return "single_lp";
    case PlanMethod::sign_enum: return "sign_enum";
    case PlanMethod::qcqp_diag: return "qcqp_diag";
    case PlanMethod::l1_fallback: return "l1_fallback";
    }
    return "unknown";
}

DesignInputs prepare_design(const LinearSystem& sys, const Mat& spoofed_sigma0, const SpoofSpec& spec) {
    sys.validate();
    spec.validate(sys.state_dim());
    DesignInputs in;
    in.sys = sys;
    in.spoofed = build_gain_schedule(sys, spoofed_sigma0, spec.horizon);
    in.terms = build_terms(sys, in.spoofed, in.spoofed);
    in.table = build_coeff_table(in.terms);
    in.cs = build_constraint_matrix(in.table, spec.d, spec.m0_bias);
    in.lemma1 = check_lemma1(sys, in.spoofed);
    return in;
}

SpoofPlan design_l1(const DesignInputs& in, const SpoofSpec& spec, DesignMode mode) {
    if (mode == DesignMode::force_fallback) throw DimensionError("design_l1: force_fallback applies to design_l2");
    const bool uniform = in.lemma1 && sign_uniform_nonpositive(in.cs.g);
    bool zero_bias = true;
    for (double v : spec.m0_bias.e)
        if (v != 0.0) zero_bias = false;

    if (mode != DesignMode::force_enumeration && uniform && zero_bias) return solve_aligned_lp(in, spec);

    const std::size_t npat = std::size_t{1} << in.cs.dim;
    std::uint64_t total = 1;
    bool over_cap = false;
    for (std::size_t q = 0; q < in.cs.steps.size() && !over_cap; ++q) {
        total *= npat;
        if (total > kEnumerationCap) over_cap = true;
    }
    if (mode != DesignMode::force_enumeration && uniform && over_cap) return solve_aligned_lp(in, spec);
    return solve_sign_enumeration(in, spec);
}

SpoofPlan design_l2(const DesignInputs& in, const SpoofSpec& spec, DesignMode mode) {
    if (mode == DesignMode::force_enumeration) throw DimensionError("design_l2: force_enumeration applies to design_l1");
    bool zero_bias = true;
    for (double v : spec.m0_bias.e)
        if (v != 0.0) zero_bias = false;
    // The squared-component reduction needs every phi(t, i) diagonal and
    // sign-uniform; checking the built table directly covers non-diagonal
    // noise covariances as well as non-diagonal F/H.
    bool phi_diag = diagonal(in.sys.f) && diagonal(in.sys.h);
    for (std::size_t t = 1; phi_diag && t <= in.table.horizon; ++t)
        for (std::size_t i = 1; phi_diag && i <= t; ++i)
            if (!diagonal(in.table.at(t, i))) phi_diag = false;
    const bool diag_path = phi_diag && in.lemma1 && zero_bias;

    if (mode != DesignMode::force_fallback && diag_path) {
        // With everything diagonal, phi(t, i) is diagonal and sign-uniform, so
        // s_{i,c} = eps_{i,c}^2 turns each squared-L2 constraint into a linear
        // one with coefficients phi_cc^2 (cross terms only add margin).
        const std::size_t ncols = in.cs.dim * in.cs.horizon;
        LpProblem lp;
        lp.c = expand_gamma(spec, in.cs.dim);
        lp.a = Mat::zeros(in.cs.steps.size(), ncols);
        lp.b = Vec::zeros(in.cs.steps.size());
        for (std::size_t q = 0; q < in.cs.steps.size(); ++q) {
            for (std::size_t j = 0; j < ncols; ++j) {
                const double coeff = in.cs.g.at(q, j);
                lp.a.at(q, j) = coeff * coeff;
            }
            lp.b[q] = in.cs.d[q] * in.cs.d[q];
        }
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal)
            throw InfeasibleDesignError("design_l2: squared-component LP " +
                                        std::string(sol.status == LpStatus::infeasible ? "infeasible" : "unbounded"));
        SpoofPlan plan;
        plan.epsilons.assign(spec.horizon, Vec::zeros(in.cs.dim));
        for (std::size_t i = 0; i < spec.horizon; ++i)
            for (std::size_t c = 0; c < in.cs.dim; ++c)
                plan.epsilons[i][c] = std::sqrt(std::max(0.0, sol.x[c * spec.horizon + i]));
        plan.method = PlanMethod::qcqp_diag;
        plan.lp_count = 1;
        plan.objective = plan_energy(spec, plan.epsilons);
        plan.achieved = achieved_norms(in, spec, plan.epsilons);
        return plan;
    }

    // General systems: meet the L1 constraints at sqrt(dim) * d, which implies
    // the L2 constraints. Flagged as a fallback because the energy is not
    // minimal for the squared objective.
    SpoofSpec inflated = spec;
    inflated.norm_p = 1;
    const double scale = std::sqrt(static_cast<double>(in.cs.dim));
    for (double& v : inflated.d) v *= scale;
    DesignInputs in_inflated = in;
    in_inflated.cs = build_constraint_matrix(in.table, inflated.d, inflated.m0_bias);
    SpoofPlan plan = design_l1(in_inflated, inflated);
    plan.method = PlanMethod::l1_fallback;
    plan.objective = plan_energy(spec, plan.epsilons);
    plan.achieved = achieved_norms(in, spec, plan.epsilons);
    return plan;
}

PlanCheck verify_plan(const DesignInputs& in, const SpoofSpec& spec, const SpoofPlan& plan) {
    PlanCheck check;
    check.min_margin = std::numeric_limits<double>::infinity();
    const std::vector<double> achieved = achieved_norms(in, spec, plan.epsilons);
    for (std::size_t q = 0; q < in.cs.steps.size(); ++q) {
        PlanCheckEntry e;
        e.step = in.cs.steps[q];
        e.desired = in.cs.d[q];
        e.achieved = achieved[q];
        e.margin = e.achieved - e.desired;
        check.min_margin = std::min(check.min_margin, e.margin);
        check.entries.push_back(e);
    }
    check.pass = check.min_margin >= -kMarginTol;
    return check;
}

} // namespace spoofkit
