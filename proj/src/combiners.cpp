#include "randpv/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace randpv {

namespace {

// Largest s - gamma + 1 values, ascending.
std::vector<Probability> upper_order_statistics(std::span<const Probability> per_study,
                                                int gamma) {
    const int s = static_cast<int>(per_study.size());
    if (gamma < 1) throw std::invalid_argument("combiner: gamma must be >= 1");
    if (s < gamma) throw std::invalid_argument("combiner: need at least gamma p-values");
    std::vector<Probability> sorted(per_study.begin(), per_study.end());
    std::sort(sorted.begin(), sorted.end());
    return {sorted.begin() + (gamma - 1), sorted.end()};
}

}  // namespace

Probability stouffer_pc_pvalue(std::span<const Probability> per_study, int gamma) {
    for (Probability p : per_study) {
        require_probability(p, "stouffer_pc_pvalue: per-study p-value");
        if (p == 0.0 || p == 1.0)
            throw std::domain_error("stouffer_pc_pvalue: p-values must lie strictly inside (0,1)");
    }
    const std::vector<Probability> upper = upper_order_statistics(per_study, gamma);
    double t = 0.0;
    for (Probability p : upper) t -= std_normal_quantile(p);  // Phi^{-1}(1-p) = -Phi^{-1}(p)
    t /= std::sqrt(static_cast<double>(upper.size()));
    return std_normal_survival(t);
}

Probability fisher_pc_pvalue(std::span<const Probability> per_study, int gamma) {
    for (Probability p : per_study) {
        require_probability(p, "fisher_pc_pvalue: per-study p-value");
        if (p == 0.0)
            throw std::domain_error("fisher_pc_pvalue: p-values must be strictly positive");
    }
    const std::vector<Probability> upper = upper_order_statistics(per_study, gamma);
    double t = 0.0;
    for (Probability p : upper) t -= 2.0 * std::log(p);
    return chi_square_survival(t, 2 * static_cast<int>(upper.size()));
}

}  // namespace randpv
