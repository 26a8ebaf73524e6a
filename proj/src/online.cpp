#include "spoofkit/online.hpp"

#include "spoofkit/errors.hpp"

namespace spoofkit {

Vec plan_step(const LinearSystem& sys, const OnlineState& state, const OnlineWindowSpec& window) {
    if (window.d.size() != window.gamma.size())
        throw DimensionError("plan_step: window profile and gamma lengths differ");
    bool any = false;
    for (double v : window.d)
        if (v != 0.0) any = true;
    if (!any) return Vec::zeros(sys.state_dim());

    SpoofSpec spec;
    spec.horizon = window.d.size();
    spec.d = window.d;
    spec.gamma = window.gamma;
    spec.norm_p = window.norm_p;
    spec.m0_bias = state.shadow.mean - state.replica.mean;

    const DesignInputs in = prepare_design(sys, state.replica.cov, spec);
    const SpoofPlan plan = spec.norm_p == 1 ? design_l1(in, spec) : design_l2(in, spec);
    return plan.epsilons.front();
}

OnlineState ingest(const LinearSystem& sys, const OnlineState& state, const Vec& u, const Vec& z, const Vec& eps) {
    OnlineState next;
    const GaussianBelief replica_prior = predict(sys, state.replica, u);
    const Mat k_replica = gain_from_prior_cov(sys, replica_prior.cov);
    next.replica = update(sys, replica_prior, z + eps, k_replica);
    const GaussianBelief shadow_prior = predict(sys, state.shadow, u);
    const Mat k_shadow = gain_from_prior_cov(sys, shadow_prior.cov);
    next.shadow = update(sys, shadow_prior, z, k_shadow);
    next.now = state.now + 1;
    return next;
}

} // namespace spoofkit
