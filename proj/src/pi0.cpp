#include "randpv/pi0.hpp"

#include <stdexcept>

namespace randpv {

Probability ecdf(std::span<const Probability> values, Probability t) {
    if (values.empty()) throw std::domain_error("ecdf: empty sample");
    require_probability(t, "ecdf: t");
    std::size_t count = 0;
    for (Probability v : values)
        if (v <= t) ++count;
    return static_cast<double>(count) / static_cast<double>(values.size());
}

Pi0Estimate schweder_spjotvoll(std::span<const Probability> pvalues, Probability lambda) {
    if (pvalues.empty()) throw std::domain_error("schweder_spjotvoll: empty p-value vector");
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::domain_error("schweder_spjotvoll: lambda must lie in [0,1)");
    Pi0Estimate est;
    est.lambda = lambda;
    est.m = static_cast<int>(pvalues.size());
    for (Probability p : pvalues) {
        require_probability(p, "schweder_spjotvoll: p-value");
        if (p > lambda) ++est.count_above;
    }
    est.value = static_cast<double>(est.count_above) /
                (static_cast<double>(est.m) * (1.0 - lambda));
    return est;
}

std::vector<Pi0Estimate> lambda_sweep(std::span<const Probability> pvalues,
                                      std::span<const Probability> lambdas) {
    std::vector<Pi0Estimate> out;
    out.reserve(lambdas.size());
    for (Probability lambda : lambdas) out.push_back(schweder_spjotvoll(pvalues, lambda));
    return out;
}

}  // namespace randpv
