#pragma once

#include <span>

#include "randpv/numerics.hpp"

namespace randpv {

/// Stouffer-type partial-conjunction p-value: the s - gamma + 1 largest
/// per-study p-values are mapped through the normal quantile, averaged with
/// a 1/sqrt(k) scale, and referred to the standard normal upper tail.
/// Every input must lie strictly inside (0,1).
Probability stouffer_pc_pvalue(std::span<const Probability> per_study, int gamma);

/// Fisher-type partial-conjunction p-value: -2 times the summed logs of the
/// s - gamma + 1 largest per-study p-values, referred to the chi-square
/// upper tail with 2(s - gamma + 1) degrees of freedom. Inputs must be
/// strictly positive (1 is allowed and contributes nothing).
Probability fisher_pc_pvalue(std::span<const Probability> per_study, int gamma);

}  // namespace randpv
