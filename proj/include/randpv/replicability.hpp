#pragma once

#include <span>
#include <vector>

#include "randpv/numerics.hpp"

namespace randpv {

/// Partial-conjunction test setup: s independent studies, replication
/// required in at least gamma of them, and the per-study threshold d that
/// separates positive from non-positive effect estimates (1/2 for the Z and
/// t models).
struct ReplicabilityConfig {
    int s = 2;
    int gamma = 2;
    Probability d = 0.5;

    /// Number of largest per-study p-values entering the combination.
    int order_k() const { return s - gamma + 1; }

    /// Throws std::invalid_argument unless 2 <= gamma <= s and 0 < d < 1.
    void validate() const;
};

/// Per-endpoint p-value bundle. in_alternative_estimate mirrors the event
/// "at least gamma per-study p-values below d", which off ties coincides
/// with lfc < threshold_c(config).
struct PValueRecord {
    std::vector<Probability> per_study;
    Probability lfc = 1.0;
    Probability randomized = 1.0;
    Probability uniform_used = 1.0;
    bool in_alternative_estimate = false;
};

/// Rescaling constant c = 1 - (1 - d)^(s - gamma + 1): the probability,
/// under a least favourable configuration, that the effect estimate lands in
/// the alternative.
Probability threshold_c(const ReplicabilityConfig& config);

/// Partial-conjunction p-value 1 - (1 - p_(gamma))^(s - gamma + 1), where
/// p_(gamma) is the gamma-th smallest per-study p-value.
Probability partial_conjunction_lfc_pvalue(std::span<const Probability> per_study,
                                           const ReplicabilityConfig& config);

/// Conditional cdf of the LFC p-value given an alternative-side estimate:
/// t/c on [0, c], 1 beyond.
Probability conditional_cdf_G(Probability t, Probability c);

/// Randomized p-value: lfc/c when lfc < c, the uniform u when lfc > c, and
/// 1 on the tie lfc = c.
Probability randomize(Probability lfc, Probability c, Probability u);

/// Full per-endpoint evaluation; the caller supplies the uniform variate,
/// this module never draws randomness.
PValueRecord evaluate_endpoint(std::span<const Probability> per_study,
                               const ReplicabilityConfig& config, Probability u);

/// Rejection at level alpha: lfc < alpha (strict).
bool reject(Probability lfc, Probability alpha);

/// k-th smallest value (1-based) of a probability vector.
Probability order_statistic(std::span<const Probability> values, int k);

}  // namespace randpv
