#pragma once

#include <span>
#include <vector>

#include "randpv/numerics.hpp"

namespace randpv {

/// Per-study one-sided test family. The Z model has known unit variance;
/// the t model estimates the variance from the sample.
enum class MarginalModelKind { z_known_unit_variance, t_unknown_variance };

/// Raw observations of one study for one endpoint.
struct StudySample {
    std::vector<double> observations;
};

/// Outcome of a one-sided marginal test: the test statistic, the p-value
/// computed under the least favourable configuration (effect 0), and whether
/// the effect estimate landed on the alternative side. The latter two are
/// linked: estimator_positive holds exactly when lfc_pvalue < 1/2.
struct MarginalResult {
    double statistic = 0.0;
    Probability lfc_pvalue = 1.0;
    bool estimator_positive = false;
};

/// Test statistic for one study. Z model: the sample mean. t model:
/// sqrt(n) * mean / sd with the n-1 divisor; throws degenerate_sample_error
/// when the sample variance is zero.
double marginal_statistic(std::span<const double> observations, MarginalModelKind kind);

/// One-sided p-value of the statistic under a zero effect.
/// Z model: 1 - Phi(sqrt(n) * statistic); t model: upper t tail with n-1
/// degrees of freedom. Strictly decreasing in the statistic.
Probability marginal_lfc_pvalue(double statistic, MarginalModelKind kind, int n);

/// Single-study randomized p-value (threshold c = 1/2): 2p when p <= 1/2
/// (so the tie p = 1/2 yields 1), otherwise the uniform variate u.
Probability marginal_randomized_pvalue(Probability lfc_pvalue, Probability u);

/// Statistic, LFC p-value and estimator sign in one pass.
MarginalResult evaluate_marginal(std::span<const double> observations, MarginalModelKind kind);

/// P(p <= x) for the Z-model per-study LFC p-value when the true effect is
/// theta and the sample size is n: 1 - Phi(Phi^{-1}(1-x) - sqrt(n)*theta).
/// theta = +infinity is accepted as a sentinel (the p-value is then 0 almost
/// surely, so the result is 1 for every x > 0).
double marginal_pvalue_cdf(Probability x, double theta, int n);

}  // namespace randpv
