#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofkit/kalman.hpp"
#include "spoofkit/linalg.hpp"
#include "spoofkit/separation.hpp"

namespace spoofkit {

// Desired separation profile and design weights over a fixed horizon.
// d[t-1] is the separation the attacker wants at step t (0 = unconstrained),
// gamma[t-1] > 0 weights the energy of eps_t, norm_p selects the separation
// norm (1 or 2), and m0_bias is the expected initial estimate difference.
struct SpoofSpec {
    std::size_t horizon = 0;
    std::vector<double> d;
    std::vector<double> gamma;
    int norm_p = 1;
    Vec m0_bias;

    void validate(std::size_t dim) const;
};

enum class PlanMethod { single_lp, sign_enum, qcqp_diag, l1_fallback };

std::string to_string(PlanMethod m);

struct SpoofPlan {
    std::vector<Vec> epsilons;     // one per step 1..horizon
    double objective = 0.0;        // sum_t gamma_t * ||eps_t||_p^p
    PlanMethod method = PlanMethod::single_lp;
    std::uint64_t lp_count = 0;
    std::vector<double> achieved;  // predicted separation norm at each constrained step
};

enum class DesignMode { automatic, force_enumeration, force_fallback };

// Everything the design routines need, bundled so the pieces stay consistent.
struct DesignInputs {
    LinearSystem sys;
    GainSchedule spoofed;
    SeparationTerms terms;
    CoeffTable table;
    ConstraintSystem cs;
    bool lemma1 = false;
};

// Builds the spoofed-filter schedule from its initial covariance, the
// difference terms, the coefficient table and the constraint system.
DesignInputs prepare_design(const LinearSystem& sys, const Mat& spoofed_sigma0, const SpoofSpec& spec);

// Minimum weighted-L1-energy design meeting every constraint in L1 norm.
//
// In the sign-uniform regime (check_lemma1) with zero initial bias this is a
// single LP over nonnegative components. With a bias, or outside the regime,
// each constraint picks one of 2^dim orthant certificates and all sign
// assignments are enumerated (capped at 65536 LP solves); in-regime problems
// over the cap fall back to the single LP oriented along the regime orthant.
SpoofPlan design_l1(const DesignInputs& in, const SpoofSpec& spec, DesignMode mode = DesignMode::automatic);

// Minimum weighted-squared-L2-energy design meeting every constraint in L2
// norm. Diagonal sign-uniform systems reduce to one LP in the squared
// components; anything else routes through design_l1 with d scaled by
// sqrt(dim), which satisfies the L2 constraints but may overspend.
SpoofPlan design_l2(const DesignInputs& in, const SpoofSpec& spec, DesignMode mode = DesignMode::automatic);

struct PlanCheckEntry {
    std::size_t step = 0;
    double desired = 0.0;
    double achieved = 0.0;
    double margin = 0.0;
};

struct PlanCheck {
    std::vector<PlanCheckEntry> entries;
    bool pass = false;
    double min_margin = 0.0;
};

// Recomputes the predicted separation for each constrained step from the
// closed-form expectation and compares it with the profile. A plan passes
// when every margin is at least -1e-6.
PlanCheck verify_plan(const DesignInputs& in, const SpoofSpec& spec, const SpoofPlan& plan);

} // namespace spoofkit
