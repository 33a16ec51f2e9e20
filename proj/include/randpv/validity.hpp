#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randpv/replicability.hpp"

namespace randpv {

/// A cumulative distribution function sampled on a grid.
struct CdfCurve {
    std::vector<double> grid;
    std::vector<double> values;
    std::string label;
};

/// Result of a numeric order / validity check. holds is max_violation
/// within the check's tolerance; witness is the grid point of the largest
/// violation when the check fails.
struct OrderCheckReport {
    bool holds = true;
    double max_violation = 0.0;
    std::optional<double> witness;
    std::string note;
};

/// Numeric tolerance separating genuine order violations from floating
/// noise at the documented cdf accuracy.
inline constexpr double order_check_tolerance = 1e-9;

/// P(the effect estimate lands in the alternative) for a Z-model effect
/// column: the Poisson-binomial tail over per-study probabilities
/// Phi(sqrt(n) * theta_i), with +infinity contributing probability 1.
double prob_estimator_in_alternative(std::span<const double> theta_column,
                                     const ReplicabilityConfig& config, int n);

/// P(p^LFC <= t) for a fixed Z-model effect column, exactly: the
/// gamma-th order statistic of the per-study p-values must fall below
/// 1 - (1-t)^{1/(s-gamma+1)}, evaluated by the Poisson-binomial tail.
double exact_lfc_cdf_at(std::span<const double> theta_column,
                        const ReplicabilityConfig& config, int n, Probability t);

/// P(p^rand <= t) for a fixed Z-model effect column:
/// t * (1 - F_LFC(c)) + F_LFC(t*c) with c = threshold_c(config).
double exact_rand_cdf_at(std::span<const double> theta_column,
                         const ReplicabilityConfig& config, int n, Probability t);

CdfCurve exact_lfc_cdf(std::span<const double> theta_column, const ReplicabilityConfig& config,
                       int n, std::span<const double> grid);

CdfCurve exact_rand_cdf(std::span<const double> theta_column, const ReplicabilityConfig& config,
                        int n, std::span<const double> grid);

/// Checks the validity inequality for the randomized p-value on a null
/// effect column: P(p^LFC <= z) <= z * P(estimate in alternative) / c for
/// z in the grid (grid points must lie in [0, c]). Throws if the column is
/// not in the null.
OrderCheckReport check_theorem2_condition(std::span<const double> theta_column,
                                          const ReplicabilityConfig& config, int n,
                                          std::span<const double> z_grid);

/// Checks that N(mean1, variance) is hazard-rate smaller than
/// N(mean2, variance): the survival ratio must not decrease along the grid.
/// Ratio decreases are measured relative to the ratio magnitude.
OrderCheckReport check_hazard_rate_order(double mean1, double mean2, double variance,
                                         std::span<const double> grid);

/// Checks the stochastic sandwich between the LFC-based cdf, the randomized
/// cdf and the identity: F_LFC <= F_rand <= t pointwise when the column is
/// in the null, t <= F_rand <= F_LFC when it is in the alternative. The
/// note records which regime was checked.
OrderCheckReport check_stochastic_sandwich(std::span<const double> theta_column,
                                           const ReplicabilityConfig& config, int n,
                                           std::span<const double> grid);

/// Checks that the i-th order statistic of s transformed per-study
/// variables (cdf u -> Phi(Phi^{-1}(u) - sqrt(n)*mean_k) on (0,1)) is
/// hazard-rate smaller than the maximum of i standard uniforms.
OrderCheckReport check_order_statistic_lemma(int s, int i,
                                             std::span<const double> shifted_means, int n,
                                             std::span<const double> grid);

/// CSV with columns (t, F_LFC, F_rand, identity) for a fixed effect column.
std::string cdf_curves_csv(std::span<const double> theta_column,
                           const ReplicabilityConfig& config, int n,
                           std::span<const double> grid, std::string_view provenance);

}  // namespace randpv
