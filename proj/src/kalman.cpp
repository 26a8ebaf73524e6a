#include "spoofkit/kalman.hpp"

#include <string>

#include "spoofkit/errors.hpp"

namespace spoofkit {

void LinearSystem::validate() const {
    const std::size_t n = f.rows;
    const std::size_t m = h.rows;
    if (f.cols != n) throw DimensionError("system: F must be square");
    if (g.rows != n) throw DimensionError("system: G row count must match state dimension");
    if (h.cols != n) throw DimensionError("system: H column count must match state dimension");
    if (r.rows != n || r.cols != n) throw DimensionError("system: R must be state_dim x state_dim");
    if (q.rows != m || q.cols != m) throw DimensionError("system: Q must be meas_dim x meas_dim");
    if (!all_finite(f) || !all_finite(g) || !all_finite(h) || !all_finite(r) || !all_finite(q))
        throw DimensionError("system: matrices must be finite");
}

GainSchedule build_gain_schedule(const LinearSystem& sys, const Mat& sigma0, std::size_t horizon) {
    sys.validate();
    if (sigma0.rows != sys.state_dim() || sigma0.cols != sys.state_dim())
        throw DimensionError("build_gain_schedule: Sigma_0 must be state_dim x state_dim");
    GainSchedule sched;
    sched.gains.reserve(horizon);
    sched.prior_covs.reserve(horizon);
    sched.post_covs.reserve(horizon);
    sched.innov_covs.reserve(horizon);
    const Mat ft = transpose(sys.f);
    const Mat ht = transpose(sys.h);
    const Mat eye = Mat::identity(sys.state_dim());
    Mat post = sigma0;
    for (std::size_t t = 1; t <= horizon; ++t) {
        const Mat prior = symmetrize(sys.f * post * ft + sys.r);
        const Mat s = symmetrize(sys.h * prior * ht + sys.q);
        Mat s_inv;
        try {
            s_inv = mat_inv(s);
        } catch (const SingularMatrixError&) {
            throw SingularMatrixError("build_gain_schedule: innovation covariance singular at step " +
                                      std::to_string(t));
        }
        const Mat k = prior * ht * s_inv;
        post = symmetrize((eye - k * sys.h) * prior);
        sched.prior_covs.push_back(prior);
        sched.innov_covs.push_back(s);
        sched.gains.push_back(k);
        sched.post_covs.push_back(post);
    }
    return sched;
}

GaussianBelief predict(const LinearSystem& sys, const GaussianBelief& belief, const Vec& u) {
    GaussianBelief out;
    out.mean = sys.f * belief.mean + sys.g * u;
    out.cov = symmetrize(sys.f * belief.cov * transpose(sys.f) + sys.r);
    return out;
}

GaussianBelief update(const LinearSystem& sys, const GaussianBelief& belief, const Vec& z, const Mat& gain) {
    if (z.dim() != sys.meas_dim()) throw DimensionError("update: measurement dimension mismatch");
    GaussianBelief out;
    out.mean = belief.mean + gain * (z - sys.h * belief.mean);
    out.cov = symmetrize((Mat::identity(sys.state_dim()) - gain * sys.h) * belief.cov);
    return out;
}

Mat gain_from_prior_cov(const LinearSystem& sys, const Mat& prior_cov) {
    const Mat ht = transpose(sys.h);
    const Mat s = symmetrize(sys.h * prior_cov * ht + sys.q);
    return prior_cov * ht * mat_inv(s);
}

std::vector<GaussianBelief> run_filter(const LinearSystem& sys, const GaussianBelief& init,
                                       const std::vector<Vec>& controls, const std::vector<Vec>& measurements) {
    if (controls.size() != measurements.size())
        throw DimensionError("run_filter: controls and measurements must have equal length");
    std::vector<GaussianBelief> out;
    out.reserve(measurements.size());
    GaussianBelief belief = init;
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const GaussianBelief prior = predict(sys, belief, controls[i]);
        const Mat k = gain_from_prior_cov(sys, prior.cov);
        belief = update(sys, prior, measurements[i], k);
        out.push_back(belief);
    }
    return out;
}

bool schedules_equal(const GainSchedule& a, const GainSchedule& b) {
    if (a.horizon() != b.horizon()) return false;
    for (std::size_t i = 0; i < a.horizon(); ++i) {
        if (!(a.gains[i] == b.gains[i])) return false;
        if (!(a.post_covs[i] == b.post_covs[i])) return false;
    }
    return true;
}

} // namespace spoofkit
