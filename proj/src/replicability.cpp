#include "randpv/replicability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randpv {

void ReplicabilityConfig::validate() const {
    if (s < 2) throw std::invalid_argument("ReplicabilityConfig: s must be >= 2");
    if (gamma < 2 || gamma > s)
        throw std::invalid_argument("ReplicabilityConfig: need 2 <= gamma <= s");
    if (!(d > 0.0 && d < 1.0))
        throw std::invalid_argument("ReplicabilityConfig: d must lie strictly inside (0,1)");
}

Probability threshold_c(const ReplicabilityConfig& config) {
    config.validate();
    return 1.0 - std::pow(1.0 - config.d, static_cast<double>(config.order_k()));
}

Probability order_statistic(std::span<const Probability> values, int k) {
    if (k < 1 || k > static_cast<int>(values.size()))
        throw std::invalid_argument("order_statistic: k out of range");
    std::vector<Probability> copy(values.begin(), values.end());
    std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
    return copy[static_cast<std::size_t>(k - 1)];
}

Probability partial_conjunction_lfc_pvalue(std::span<const Probability> per_study,
                                           const ReplicabilityConfig& config) {
    config.validate();
    if (static_cast<int>(per_study.size()) != config.s)
        throw std::invalid_argument("partial_conjunction_lfc_pvalue: expected s p-values");
    for (Probability p : per_study) require_probability(p, "per-study p-value");
    const Probability p_gamma = order_statistic(per_study, config.gamma);
    return 1.0 - std::pow(1.0 - p_gamma, static_cast<double>(config.order_k()));
}

Probability conditional_cdf_G(Probability t, Probability c) {
    require_probability(t, "conditional_cdf_G: t");
    require_probability(c, "conditional_cdf_G: c");
    if (c == 0.0) throw std::domain_error("conditional_cdf_G: c must be positive");
    return t <= c ? t / c : 1.0;
}

Probability randomize(Probability lfc, Probability c, Probability u) {
    require_probability(lfc, "randomize: lfc");
    require_probability(u, "randomize: u");
    if (!(c > 0.0 && c < 1.0))
        throw std::domain_error("randomize: c must lie strictly inside (0,1)");
    if (lfc < c) return lfc / c;
    if (lfc > c) return u;
    return 1.0;  // tie lfc = c
}

PValueRecord evaluate_endpoint(std::span<const Probability> per_study,
                               const ReplicabilityConfig& config, Probability u) {
    require_probability(u, "evaluate_endpoint: u");
    PValueRecord record;
    record.per_study.assign(per_study.begin(), per_study.end());
    record.lfc = partial_conjunction_lfc_pvalue(per_study, config);
    record.uniform_used = u;
    record.in_alternative_estimate = order_statistic(per_study, config.gamma) < config.d;
    record.randomized = randomize(record.lfc, threshold_c(config), u);
    return record;
}

bool reject(Probability lfc, Probability alpha) {
    require_probability(lfc, "reject: lfc");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("reject: alpha must lie strictly inside (0,1)");
    return lfc < alpha;
}

}  // namespace randpv
