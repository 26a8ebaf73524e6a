#include "spoofkit/chi2.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "spoofkit/errors.hpp"

namespace spoofkit {

std::string to_string(DetectorForm f) {
    return f == DetectorForm::paper_literal ? "paper_literal" : "normalized_innovation";
}

double detector_statistic(DetectorForm form, const LinearSystem& sys, const GaussianBelief& prior,
                          const GaussianBelief& post, const Vec& z) {
    if (z.dim() != sys.meas_dim()) throw DimensionError("detector_statistic: measurement dimension mismatch");
    if (form == DetectorForm::paper_literal) {
        if (sys.meas_dim() != sys.state_dim())
            throw DimensionError("detector_statistic: paper_literal form needs meas_dim == state_dim");
        const Vec r = z - sys.h * post.mean;
        const Vec wr = post.cov * r;
        double g = 0.0;
        for (std::size_t i = 0; i < r.dim(); ++i) g += r[i] * wr[i];
        return g;
    }
    const Vec nu = z - sys.h * prior.mean;
    const Mat s = symmetrize(sys.h * prior.cov * transpose(sys.h) + sys.q);
    const Vec snu = mat_inv(s) * nu;
    double g = 0.0;
    for (std::size_t i = 0; i < nu.dim(); ++i) g += nu[i] * snu[i];
    return g;
}

double binom_pvalue(std::uint64_t x, std::uint64_t n, double p0) {
    if (x == 0) return 1.0;
    if (x > n) throw DimensionError("binom_pvalue: x exceeds n");
    if (!(p0 > 0.0 && p0 < 1.0)) throw DimensionError("binom_pvalue: p0 must lie strictly between 0 and 1");
    const double log_p = std::log(p0);
    const double log_q = std::log1p(-p0);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    // log P(X = k), then sum exp shifted by the largest term.
    std::vector<double> log_terms;
    log_terms.reserve(n - x + 1);
    double max_term = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = x; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double nd = static_cast<double>(n);
        const double lt = log_n_fact - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + kd * log_p +
                          (nd - kd) * log_q;
        log_terms.push_back(lt);
        max_term = std::max(max_term, lt);
    }
    double sum = 0.0;
    for (double lt : log_terms) sum += std::exp(lt - max_term);
    const double result = std::exp(max_term + std::log(sum));
    return std::min(1.0, result);
}

double chi2_cdf_2dof(double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - std::exp(-0.5 * x);
}

} // namespace spoofkit
