#include "randpv/marginal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "randpv/errors.hpp"

namespace randpv {

namespace {

void check_finite(std::span<const double> observations) {
    for (double v : observations)
        if (!std::isfinite(v)) throw std::domain_error("marginal: non-finite observation");
}

}  // namespace

double marginal_statistic(std::span<const double> observations, MarginalModelKind kind) {
    check_finite(observations);
    const std::size_t n = observations.size();
    if (kind == MarginalModelKind::z_known_unit_variance) {
        if (n < 1) throw std::invalid_argument("marginal_statistic: empty sample");
        double sum = 0.0;
        for (double v : observations) sum += v;
        return sum / static_cast<double>(n);
    }

    if (n < 2) throw std::invalid_argument("marginal_statistic: t model needs n >= 2");
    double sum = 0.0;
    for (double v : observations) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : observations) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n - 1);
    if (var <= 0.0)
        throw degenerate_sample_error("marginal_statistic: zero sample variance");
    return std::sqrt(static_cast<double>(n)) * mean / std::sqrt(var);
}

Probability marginal_lfc_pvalue(double statistic, MarginalModelKind kind, int n) {
    if (!std::isfinite(statistic))
        throw std::domain_error("marginal_lfc_pvalue: non-finite statistic");
    if (kind == MarginalModelKind::z_known_unit_variance) {
        if (n < 1) throw std::domain_error("marginal_lfc_pvalue: n must be >= 1");
        return std_normal_survival(std::sqrt(static_cast<double>(n)) * statistic);
    }
    if (n < 2) throw std::domain_error("marginal_lfc_pvalue: t model needs n >= 2");
    return 1.0 - student_t_cdf(statistic, n - 1);
}

Probability marginal_randomized_pvalue(Probability lfc_pvalue, Probability u) {
    require_probability(lfc_pvalue, "marginal_randomized_pvalue: lfc_pvalue");
    require_probability(u, "marginal_randomized_pvalue: u");
    return lfc_pvalue <= 0.5 ? 2.0 * lfc_pvalue : u;
}

MarginalResult evaluate_marginal(std::span<const double> observations, MarginalModelKind kind) {
    MarginalResult r;
    r.statistic = marginal_statistic(observations, kind);
    const int n = static_cast<int>(observations.size());
    r.lfc_pvalue = marginal_lfc_pvalue(r.statistic, kind, n);
    r.estimator_positive = r.statistic > 0.0;
    return r;
}

double marginal_pvalue_cdf(Probability x, double theta, int n) {
    require_probability(x, "marginal_pvalue_cdf: x");
    if (n < 1) throw std::domain_error("marginal_pvalue_cdf: n must be >= 1");
    if (std::isnan(theta) || theta == -std::numeric_limits<double>::infinity())
        throw std::domain_error("marginal_pvalue_cdf: effect must be finite or +infinity");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (theta == std::numeric_limits<double>::infinity()) return 1.0;
    // Phi^{-1}(1-x) = -Phi^{-1}(x), accurate for small x.
    const double z = -std_normal_quantile(x);
    return std_normal_survival(z - std::sqrt(static_cast<double>(n)) * theta);
}

}  // namespace randpv
