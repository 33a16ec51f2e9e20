#include "randpv/validity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "randpv/config.hpp"
#include "randpv/marginal.hpp"

namespace randpv {

namespace {

void check_column(std::span<const double> theta_column, const ReplicabilityConfig& config) {
    config.validate();
    if (static_cast<int>(theta_column.size()) != config.s)
        throw std::invalid_argument("validity: effect column must have s entries");
    for (double theta : theta_column)
        if (std::isnan(theta) || theta == -std::numeric_limits<double>::infinity())
            throw std::domain_error("validity: effects must be finite or +infinity");
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::domain_error("validity: empty grid");
    for (double t : grid)
        if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("validity: grid point outside [0,1]");
}

int count_positive(std::span<const double> theta_column) {
    int positives = 0;
    for (double theta : theta_column)
        if (theta > 0.0) ++positives;
    return positives;
}

// Per-study probabilities P(p_{i,j} <= x) for the whole column.
std::vector<double> study_probs(std::span<const double> theta_column, int n, double x) {
    std::vector<double> probs(theta_column.size());
    for (std::size_t i = 0; i < theta_column.size(); ++i)
        probs[i] = marginal_pvalue_cdf(x, theta_column[i], n);
    return probs;
}

// Largest consecutive decrease of a sequence that should be nondecreasing,
// measured relative to the sequence magnitude (survival ratios can reach
// 1e4 and more, where an absolute tolerance would sit below floating noise).
OrderCheckReport monotone_report(std::span<const double> grid, std::span<const double> values,
                                 std::string note) {
    OrderCheckReport report;
    report.note = std::move(note);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double scale = std::max({std::fabs(values[i]), std::fabs(values[i + 1]), 1.0});
        const double drop = (values[i] - values[i + 1]) / scale;
        if (drop > report.max_violation) {
            report.max_violation = drop;
            report.witness = grid[i + 1];
        }
    }
    report.holds = report.max_violation <= order_check_tolerance;
    if (report.holds) report.witness.reset();
    return report;
}

}  // namespace

double prob_estimator_in_alternative(std::span<const double> theta_column,
                                     const ReplicabilityConfig& config, int n) {
    check_column(theta_column, config);
    // P(theta_hat_i > 0) = Phi(sqrt(n) * theta_i); a per-study p-value below
    // d is the same event.
    return poisson_binomial_tail(study_probs(theta_column, n, config.d), config.gamma);
}

double exact_lfc_cdf_at(std::span<const double> theta_column, const ReplicabilityConfig& config,
                        int n, Probability t) {
    check_column(theta_column, config);
    require_probability(t, "exact_lfc_cdf_at: t");
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double x = 1.0 - std::pow(1.0 - t, 1.0 / static_cast<double>(config.order_k()));
    return poisson_binomial_tail(study_probs(theta_column, n, x), config.gamma);
}

double exact_rand_cdf_at(std::span<const double> theta_column, const ReplicabilityConfig& config,
                         int n, Probability t) {
    require_probability(t, "exact_rand_cdf_at: t");
    const double c = threshold_c(config);
    return t * (1.0 - exact_lfc_cdf_at(theta_column, config, n, c)) +
           exact_lfc_cdf_at(theta_column, config, n, t * c);
}

CdfCurve exact_lfc_cdf(std::span<const double> theta_column, const ReplicabilityConfig& config,
                       int n, std::span<const double> grid) {
    check_grid(grid);
    CdfCurve curve;
    curve.label = "lfc";
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.reserve(grid.size());
    for (double t : grid) curve.values.push_back(exact_lfc_cdf_at(theta_column, config, n, t));
    return curve;
}

CdfCurve exact_rand_cdf(std::span<const double> theta_column, const ReplicabilityConfig& config,
                        int n, std::span<const double> grid) {
    check_grid(grid);
    CdfCurve curve;
    curve.label = "rand";
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.reserve(grid.size());
    for (double t : grid) curve.values.push_back(exact_rand_cdf_at(theta_column, config, n, t));
    return curve;
}

OrderCheckReport check_theorem2_condition(std::span<const double> theta_column,
                                          const ReplicabilityConfig& config, int n,
                                          std::span<const double> z_grid) {
    check_column(theta_column, config);
    check_grid(z_grid);
    if (count_positive(theta_column) >= config.gamma)
        throw std::domain_error("check_theorem2_condition: effect column is not in the null");
    const double c = threshold_c(config);
    for (double z : z_grid)
        if (z > c + 1e-12)
            throw std::domain_error("check_theorem2_condition: grid point above threshold c");

    const double prob_alternative = prob_estimator_in_alternative(theta_column, config, n);
    OrderCheckReport report;
    report.note = "validity inequality on the null column";
    for (double z : z_grid) {
        const double left = exact_lfc_cdf_at(theta_column, config, n, z);
        const double right = z * prob_alternative / c;
        const double violation = left - right;
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.witness = z;
        }
    }
    report.holds = report.max_violation <= order_check_tolerance;
    if (report.holds) report.witness.reset();
    return report;
}

OrderCheckReport check_hazard_rate_order(double mean1, double mean2, double variance,
                                         std::span<const double> grid) {
    if (!(variance > 0.0))
        throw std::domain_error("check_hazard_rate_order: variance must be positive");
    if (grid.empty()) throw std::domain_error("check_hazard_rate_order: empty grid");
    const double sigma = std::sqrt(variance);
    std::vector<double> ratio;
    std::vector<double> where;
    for (double t : grid) {
        const double s1 = std_normal_survival((t - mean1) / sigma);
        const double s2 = std_normal_survival((t - mean2) / sigma);
        if (s1 == 0.0) break;  // a/0 = infinity: the ratio can only stay nondecreasing
        ratio.push_back(s2 / s1);
        where.push_back(t);
    }
    return monotone_report(where, ratio, "survival ratio of two normal laws");
}

OrderCheckReport check_stochastic_sandwich(std::span<const double> theta_column,
                                           const ReplicabilityConfig& config, int n,
                                           std::span<const double> grid) {
    check_column(theta_column, config);
    check_grid(grid);
    const bool null_regime = count_positive(theta_column) < config.gamma;

    OrderCheckReport report;
    report.note = null_regime ? "null sandwich F_LFC <= F_rand <= t"
                              : "alternative sandwich t <= F_rand <= F_LFC";
    for (double t : grid) {
        const double f_lfc = exact_lfc_cdf_at(theta_column, config, n, t);
        const double f_rand = exact_rand_cdf_at(theta_column, config, n, t);
        const double violation = null_regime
                                     ? std::max(f_lfc - f_rand, f_rand - t)
                                     : std::max(t - f_rand, f_rand - f_lfc);
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.witness = t;
        }
    }
    report.holds = report.max_violation <= order_check_tolerance;
    if (report.holds) report.witness.reset();
    return report;
}

OrderCheckReport check_order_statistic_lemma(int s, int i,
                                             std::span<const double> shifted_means, int n,
                                             std::span<const double> grid) {
    if (s < 2 || i < 1 || i > s)
        throw std::invalid_argument("check_order_statistic_lemma: need 1 <= i <= s, s >= 2");
    if (static_cast<int>(shifted_means.size()) != s)
        throw std::invalid_argument("check_order_statistic_lemma: expected s means");
    check_grid(grid);

    // X_k = Phi(sqrt(n) * sample mean) has cdf Phi(Phi^{-1}(u) - sqrt(n)*mean_k)
    // on (0,1). Survivals are computed directly (X_(i:s) > u means at least
    // s-i+1 of the X_k exceed u) so the far tail keeps its precision.
    std::vector<double> survival_k(static_cast<std::size_t>(s));
    std::vector<double> ratio;
    std::vector<double> where;
    for (double u : grid) {
        if (u <= 0.0 || u >= 1.0) continue;  // interior of the shared support
        const double z = std_normal_quantile(u);
        for (int k = 0; k < s; ++k)
            survival_k[static_cast<std::size_t>(k)] = std_normal_survival(
                z - std::sqrt(static_cast<double>(n)) * shifted_means[static_cast<std::size_t>(k)]);
        const double order_survival = poisson_binomial_tail(survival_k, s - i + 1);
        if (order_survival == 0.0) break;
        const double max_uniform_survival = -std::expm1(static_cast<double>(i) * std::log(u));
        ratio.push_back(max_uniform_survival / order_survival);
        where.push_back(u);
    }
    return monotone_report(where, ratio,
                           "survival ratio: max of i uniforms over the i-th order statistic");
}

std::string cdf_curves_csv(std::span<const double> theta_column,
                           const ReplicabilityConfig& config, int n,
                           std::span<const double> grid, std::string_view provenance) {
    const CdfCurve lfc = exact_lfc_cdf(theta_column, config, n, grid);
    const CdfCurve rand = exact_rand_cdf(theta_column, config, n, grid);
    std::ostringstream out;
    out << "# " << provenance << "\n";
    out << "t,F_LFC,F_rand,identity\n";
    for (std::size_t i = 0; i < lfc.grid.size(); ++i)
        out << shortest_double(lfc.grid[i]) << ',' << shortest_double(lfc.values[i]) << ','
            << shortest_double(rand.values[i]) << ',' << shortest_double(lfc.grid[i]) << "\n";
    return out.str();
}

}  // namespace randpv
