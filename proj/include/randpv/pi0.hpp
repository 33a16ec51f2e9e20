#pragma once

#include <span>
#include <vector>

#include "randpv/numerics.hpp"

namespace randpv {

/// Schweder-Spjotvoll estimate of the proportion of true null hypotheses.
/// value = count_above / (m * (1 - lambda)); deliberately not truncated at 1.
struct Pi0Estimate {
    double value = 0.0;
    Probability lambda = 0.5;
    int count_above = 0;
    int m = 0;
};

/// Empirical cdf of a p-value vector at t (fraction of values <= t).
Probability ecdf(std::span<const Probability> values, Probability t);

/// pi0 estimate at tuning parameter lambda in [0,1). The count of p-values
/// strictly above lambda is kept as an integer so the estimate equals the
/// count-based formula exactly.
Pi0Estimate schweder_spjotvoll(std::span<const Probability> pvalues, Probability lambda);

/// Elementwise schweder_spjotvoll over a list of tuning parameters.
std::vector<Pi0Estimate> lambda_sweep(std::span<const Probability> pvalues,
                                      std::span<const Probability> lambdas);

}  // namespace randpv
