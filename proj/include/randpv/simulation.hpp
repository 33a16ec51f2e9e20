#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "randpv/marginal.hpp"
#include "randpv/pi0.hpp"
#include "randpv/rng.hpp"

namespace randpv {

/// Which per-endpoint p-value is fed into the pi0 estimator.
enum class PvalueKind { lfc, rand, stouffer, fisher };

std::string_view kind_name(PvalueKind kind);
PvalueKind parse_kind(std::string_view name);  // throws data_error

/// One Monte Carlo experiment: m endpoints observed in s studies, of which
/// m*pi0 are true nulls. Per endpoint, the number of studies with a positive
/// effect is Binomial(gamma-1, p0) for true nulls and gamma plus
/// Binomial(s-gamma, p1) for false nulls; positive effects are drawn
/// uniformly from (0, mu_max], non-positive ones uniformly from
/// (mu_min/sqrt(n), 0].
struct SimulationSetting {
    int m = 100;
    int s = 10;
    int gamma = 6;
    double pi0 = 0.7;
    double mu_min = 0.0;
    double mu_max = 2.0;
    double p0 = 0.8;
    double p1 = 0.8;
    int n = 50;
    Probability lambda = 0.5;
    std::uint64_t seed = 1;
    int reps = 10000;
    MarginalModelKind model = MarginalModelKind::z_known_unit_variance;
    std::vector<PvalueKind> kinds = {PvalueKind::lfc, PvalueKind::rand};

    int m0() const;  // number of true-null endpoints
    void validate() const;
};

/// True effects theta_{i,j} (column-major, s rows by m columns) plus the
/// truth of each endpoint's non-replicability null. A column's null is true
/// exactly when fewer than gamma of its entries are positive.
struct EffectMatrix {
    int s = 0;
    int m = 0;
    std::vector<double> effects;
    std::vector<char> truth;

    double at(int study, int endpoint) const {
        return effects[static_cast<std::size_t>(endpoint) * s + study];
    }
    double& at(int study, int endpoint) {
        return effects[static_cast<std::size_t>(endpoint) * s + study];
    }
};

/// Mean/spread of the pi0 estimates over the replicates of one setting.
struct TableCell {
    double mean = 0.0;
    double std = 0.0;
    double mc_standard_error = 0.0;
    SimulationSetting setting;
    PvalueKind kind = PvalueKind::lfc;
};

/// Output of one replicate: per-endpoint p-values and the pi0 estimate for
/// each requested kind, in the order listed in the setting.
struct ReplicationResult {
    std::vector<PvalueKind> kinds;
    std::vector<std::vector<Probability>> pvalues;
    std::vector<Pi0Estimate> estimates;
};

/// A point of an exported curve (Figs. with ecdf or lambda sweeps).
struct CurvePoint {
    double t = 0.0;
    double value = 0.0;
    PvalueKind kind = PvalueKind::lfc;
};

/// Draws the effect matrix for one replicate. The first m0 columns are the
/// true nulls. Draw order per column: the Bernoulli trials for the
/// positive-study count, the positive-study subset (partial Fisher-Yates),
/// then the s effect magnitudes in study order.
EffectMatrix draw_effect_matrix(const SimulationSetting& setting, RandomStream& rng);

/// Runs one replicate. All randomness comes from a stream derived from
/// (setting.seed, replicate_index), so the result does not depend on
/// execution order: the effect matrix is drawn first, then the per-study
/// statistics in column-major order, then (only when the rand kind is
/// requested) one uniform per endpoint.
ReplicationResult simulate_replication(const SimulationSetting& setting,
                                       std::int64_t replicate_index);

/// One TableCell per (setting, kind), rows in grid order. Replicates may be
/// spread over several worker threads; the output is bit-identical for any
/// worker count. workers <= 0 selects the hardware concurrency.
std::vector<TableCell> run_table(std::span<const SimulationSetting> grid, int workers = 1);

/// Mean pi0 estimate per (lambda, kind) over the setting's replicates.
std::vector<CurvePoint> run_lambda_sweep(const SimulationSetting& setting,
                                         std::span<const Probability> lambdas,
                                         int workers = 1);

/// Empirical cdf step points (sorted p-value, rank/m) of one realization for
/// each requested kind.
std::vector<CurvePoint> ecdf_realization(const SimulationSetting& setting,
                                         std::int64_t replicate_index);

/// Exact expected value of the pi0 estimate under the setting (Z model
/// only): per-study rejection probabilities are integrated over the uniform
/// effect distributions by adaptive quadrature, combined across studies with
/// the exact Poisson-binomial tail, and mixed over the binomial law of the
/// positive-study count.
double expectation_oracle(const SimulationSetting& setting, PvalueKind kind);

/// Exact standard deviation of the pi0 estimate over realizations of the
/// setting. Endpoints are independent given the (fixed) true/false split,
/// so the count of p-values above lambda is a sum of two binomials with the
/// oracle's per-class probabilities.
double estimator_std_oracle(const SimulationSetting& setting, PvalueKind kind);

/// CSV writers. Both start with a provenance comment line; numbers are
/// shortest-round-trip formatted so identical runs give identical bytes.
std::string table_csv(std::span<const TableCell> cells, std::string_view provenance);
std::string curve_csv(std::span<const CurvePoint> points, std::string_view t_column,
                      std::string_view provenance);

}  // namespace randpv
