#pragma once

#include <vector>

#include "spoofkit/kalman.hpp"
#include "spoofkit/spoof_design.hpp"

namespace spoofkit {

// Attacker-side state for closed-loop planning after `now` completed steps.
// `replica` tracks the observer's filter exactly (it consumes the spoofed
// measurements the attacker forged); `shadow` is the attacker's estimate of
// the counterfactual clean filter, fed the intercepted true measurements.
struct OnlineState {
    GaussianBelief replica;
    GaussianBelief shadow;
    std::size_t now = 0;
};

// Separation targets for the upcoming window: d[j] applies to absolute step
// now + 1 + j. gamma must match d in length; zeros in d are unconstrained.
struct OnlineWindowSpec {
    std::vector<double> d;
    std::vector<double> gamma;
    int norm_p = 1;
};

// Re-solves the windowed design problem from the current beliefs, taking the
// realized estimate difference (shadow mean minus replica mean) as the
// initial bias, and returns the spoofing input for the next step only.
// A window with no active constraints returns zero. Windows whose sign
// assignments would exceed the enumeration cap fall back to the aligned
// single LP when the regime allows it; otherwise EnumerationCapError
// propagates, as does InfeasibleDesignError.
Vec plan_step(const LinearSystem& sys, const OnlineState& state, const OnlineWindowSpec& window);

// Advances both filters by one step: the replica sees z + eps, the shadow
// sees z. Gains come from each filter's own covariance, so no schedule needs
// to be precomputed.
OnlineState ingest(const LinearSystem& sys, const OnlineState& state, const Vec& u, const Vec& z, const Vec& eps);

} // namespace spoofkit
