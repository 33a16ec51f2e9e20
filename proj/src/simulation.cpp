#include "randpv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "randpv/combiners.hpp"
#include "randpv/config.hpp"
#include "randpv/errors.hpp"
#include "randpv/replicability.hpp"

namespace randpv {

namespace {

double kahan_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(replicate_index) for all indices in [0, reps) over the given
// number of threads. fn must only write to locations owned by its index.
void parallel_replicates(int reps, int workers, const std::function<void(int)>& fn) {
    workers = std::min(resolve_workers(workers), reps);
    if (workers <= 1) {
        for (int r = 0; r < reps; ++r) fn(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) fn(r);
        });
    for (auto& t : pool) t.join();
}

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

Moments moments(std::span<const double> values) {
    Moments m;
    const auto n = static_cast<double>(values.size());
    m.mean = kahan_sum(values) / n;
    if (values.size() < 2) return m;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - m.mean;
        sq[i] = d * d;
    }
    m.std = std::sqrt(kahan_sum(sq) / (n - 1.0));
    return m;
}

double binomial_pmf(int k, int trials, double p) {
    if (k < 0 || k > trials) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == trials ? 1.0 : 0.0;
    const double lc = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(trials - k + 1.0);
    return std::exp(lc + k * std::log(p) + (trials - k) * std::log1p(-p));
}

// Adaptive Simpson quadrature.
double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

}  // namespace

std::string_view kind_name(PvalueKind kind) {
    switch (kind) {
        case PvalueKind::lfc: return "lfc";
        case PvalueKind::rand: return "rand";
        case PvalueKind::stouffer: return "stouffer";
        case PvalueKind::fisher: return "fisher";
    }
    throw std::logic_error("kind_name: unreachable");
}

PvalueKind parse_kind(std::string_view name) {
    if (name == "lfc") return PvalueKind::lfc;
    if (name == "rand") return PvalueKind::rand;
    if (name == "stouffer") return PvalueKind::stouffer;
    if (name == "fisher") return PvalueKind::fisher;
    throw data_error("unknown p-value kind '" + std::string(name) + "'");
}

int SimulationSetting::m0() const {
    return static_cast<int>(std::llround(static_cast<double>(m) * pi0));
}

void SimulationSetting::validate() const {
    if (m < 2) throw std::invalid_argument("SimulationSetting: m must be >= 2");
    if (s < 2) throw std::invalid_argument("SimulationSetting: s must be >= 2");
    if (gamma < 2 || gamma > s)
        throw std::invalid_argument("SimulationSetting: need 2 <= gamma <= s");
    if (!(pi0 >= 0.0 && pi0 <= 1.0))
        throw std::invalid_argument("SimulationSetting: pi0 must lie in [0,1]");
    if (std::fabs(static_cast<double>(m) * pi0 - std::llround(static_cast<double>(m) * pi0)) >
        1e-9)
        throw std::invalid_argument("SimulationSetting: m * pi0 must be an integer");
    if (mu_min > 0.0) throw std::invalid_argument("SimulationSetting: mu_min must be <= 0");
    if (!(mu_max > 0.0)) throw std::invalid_argument("SimulationSetting: mu_max must be > 0");
    if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0))
        throw std::invalid_argument("SimulationSetting: p0, p1 must lie in [0,1]");
    const int min_n = model == MarginalModelKind::t_unknown_variance ? 2 : 1;
    if (n < min_n) throw std::invalid_argument("SimulationSetting: sample size too small");
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::invalid_argument("SimulationSetting: lambda must lie in [0,1)");
    if (reps < 1) throw std::invalid_argument("SimulationSetting: reps must be >= 1");
    if (kinds.empty()) throw std::invalid_argument("SimulationSetting: no p-value kinds");
    for (std::size_t i = 0; i < kinds.size(); ++i)
        for (std::size_t j = i + 1; j < kinds.size(); ++j)
            if (kinds[i] == kinds[j])
                throw std::invalid_argument("SimulationSetting: duplicate p-value kind");
}

EffectMatrix draw_effect_matrix(const SimulationSetting& setting, RandomStream& rng) {
    setting.validate();
    const int s = setting.s, m = setting.m, gamma = setting.gamma;
    const int m0 = setting.m0();
    const double neg_scale = setting.mu_min / std::sqrt(static_cast<double>(setting.n));

    EffectMatrix em;
    em.s = s;
    em.m = m;
    em.effects.resize(static_cast<std::size_t>(s) * m);
    em.truth.resize(static_cast<std::size_t>(m));

    std::vector<int> index(static_cast<std::size_t>(s));
    std::vector<char> positive(static_cast<std::size_t>(s));
    for (int j = 0; j < m; ++j) {
        const bool true_null = j < m0;
        const int trials = true_null ? gamma - 1 : s - gamma;
        const double success = true_null ? setting.p0 : setting.p1;
        int k = true_null ? 0 : gamma;
        for (int t = 0; t < trials; ++t)
            if (rng.uniform() < success) ++k;

        for (int i = 0; i < s; ++i) index[static_cast<std::size_t>(i)] = i;
        for (int t = 0; t < k; ++t) {
            const int pick = t + static_cast<int>(rng.uniform() * (s - t));
            std::swap(index[static_cast<std::size_t>(t)], index[static_cast<std::size_t>(pick)]);
        }
        std::fill(positive.begin(), positive.end(), 0);
        for (int t = 0; t < k; ++t) positive[static_cast<std::size_t>(index[t])] = 1;

        for (int i = 0; i < s; ++i) {
            const double u = rng.uniform();
            em.at(i, j) = positive[static_cast<std::size_t>(i)]
                              ? setting.mu_max * (1.0 - u)  // (0, mu_max]
                              : neg_scale * u;              // (mu_min/sqrt(n), 0]
        }
        em.truth[static_cast<std::size_t>(j)] = static_cast<char>(k < gamma);
    }
    return em;
}

ReplicationResult simulate_replication(const SimulationSetting& setting,
                                       std::int64_t replicate_index) {
    setting.validate();
    if (replicate_index < 0)
        throw std::invalid_argument("simulate_replication: negative replicate index");
    RandomStream rng = RandomStream::for_replicate(setting.seed,
                                                   static_cast<std::uint64_t>(replicate_index));
    const EffectMatrix em = draw_effect_matrix(setting, rng);
    const int s = setting.s, m = setting.m, n = setting.n;
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // Per-study LFC p-values, column-major like the effect matrix.
    std::vector<Probability> per_study(static_cast<std::size_t>(s) * m);
    std::vector<double> sample;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < s; ++i) {
            const double theta = em.at(i, j);
            double p;
            if (setting.model == MarginalModelKind::z_known_unit_variance) {
                // The Z statistic is the sample mean, distributed N(theta, 1/n).
                const double statistic = theta + rng.normal() / sqrt_n;
                p = std_normal_survival(sqrt_n * statistic);
            } else {
                sample.resize(static_cast<std::size_t>(n));
                for (double& x : sample) x = theta + rng.normal();
                p = marginal_lfc_pvalue(marginal_statistic(sample, setting.model),
                                        setting.model, n);
            }
            per_study[static_cast<std::size_t>(j) * s + i] = p;
        }

    const ReplicabilityConfig config{setting.s, setting.gamma, 0.5};
    const Probability c = threshold_c(config);
    const bool want_rand =
        std::find(setting.kinds.begin(), setting.kinds.end(), PvalueKind::rand) !=
        setting.kinds.end();

    std::vector<Probability> lfc(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const std::span<const Probability> col(per_study.data() + static_cast<std::size_t>(j) * s,
                                               static_cast<std::size_t>(s));
        lfc[static_cast<std::size_t>(j)] = partial_conjunction_lfc_pvalue(col, config);
    }

    ReplicationResult result;
    result.kinds = setting.kinds;
    for (PvalueKind kind : setting.kinds) {
        std::vector<Probability> pv(static_cast<std::size_t>(m));
        switch (kind) {
            case PvalueKind::lfc:
                pv = lfc;
                break;
            case PvalueKind::rand:
                break;  // filled below, after the uniforms are drawn
            case PvalueKind::stouffer:
            case PvalueKind::fisher: {
                // The combiners reject boundary values; strong effects underflow
                // the per-study p-value to exactly 0, so clamp into the open
                // interval here. The clamp never moves a value across lambda.
                std::vector<Probability> clamped(static_cast<std::size_t>(s));
                for (int j = 0; j < m; ++j) {
                    for (int i = 0; i < s; ++i)
                        clamped[static_cast<std::size_t>(i)] =
                            std::clamp(per_study[static_cast<std::size_t>(j) * s + i],
                                       1e-300, 1.0 - 1e-16);
                    pv[static_cast<std::size_t>(j)] =
                        kind == PvalueKind::stouffer
                            ? stouffer_pc_pvalue(clamped, setting.gamma)
                            : fisher_pc_pvalue(clamped, setting.gamma);
                }
                break;
            }
        }
        result.pvalues.push_back(std::move(pv));
    }

    if (want_rand) {
        // Uniforms drawn last so the data draws are identical across kind sets.
        std::vector<Probability> rand_pv(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            rand_pv[static_cast<std::size_t>(j)] =
                randomize(lfc[static_cast<std::size_t>(j)], c, rng.uniform());
        for (std::size_t k = 0; k < result.kinds.size(); ++k)
            if (result.kinds[k] == PvalueKind::rand) result.pvalues[k] = std::move(rand_pv);
    }

    for (const auto& pv : result.pvalues)
        result.estimates.push_back(schweder_spjotvoll(pv, setting.lambda));
    return result;
}

std::vector<TableCell> run_table(std::span<const SimulationSetting> grid, int workers) {
    if (grid.empty()) throw std::invalid_argument("run_table: empty grid");
    std::vector<TableCell> cells;
    for (const SimulationSetting& setting : grid) {
        setting.validate();
        const std::size_t nkinds = setting.kinds.size();
        std::vector<std::vector<double>> estimates(
            nkinds, std::vector<double>(static_cast<std::size_t>(setting.reps)));
        parallel_replicates(setting.reps, workers, [&](int rep) {
            const ReplicationResult r = simulate_replication(setting, rep);
            for (std::size_t k = 0; k < nkinds; ++k)
                estimates[k][static_cast<std::size_t>(rep)] = r.estimates[k].value;
        });
        for (std::size_t k = 0; k < nkinds; ++k) {
            const Moments mo = moments(estimates[k]);
            TableCell cell;
            cell.mean = mo.mean;
            cell.std = mo.std;
            cell.mc_standard_error = mo.std / std::sqrt(static_cast<double>(setting.reps));
            cell.setting = setting;
            cell.kind = setting.kinds[k];
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::vector<CurvePoint> run_lambda_sweep(const SimulationSetting& setting,
                                         std::span<const Probability> lambdas, int workers) {
    setting.validate();
    for (Probability lambda : lambdas)
        if (!(lambda >= 0.0 && lambda < 1.0))
            throw std::invalid_argument("run_lambda_sweep: lambda must lie in [0,1)");
    const std::size_t nkinds = setting.kinds.size();
    const std::size_t nlambdas = lambdas.size();
    std::vector<std::vector<double>> values(
        nkinds * nlambdas, std::vector<double>(static_cast<std::size_t>(setting.reps)));
    parallel_replicates(setting.reps, workers, [&](int rep) {
        const ReplicationResult r = simulate_replication(setting, rep);
        for (std::size_t k = 0; k < nkinds; ++k)
            for (std::size_t l = 0; l < nlambdas; ++l)
                values[k * nlambdas + l][static_cast<std::size_t>(rep)] =
                    schweder_spjotvoll(r.pvalues[k], lambdas[l]).value;
    });
    std::vector<CurvePoint> points;
    points.reserve(nkinds * nlambdas);
    for (std::size_t k = 0; k < nkinds; ++k)
        for (std::size_t l = 0; l < nlambdas; ++l)
            points.push_back({lambdas[l], moments(values[k * nlambdas + l]).mean,
                              setting.kinds[k]});
    return points;
}

std::vector<CurvePoint> ecdf_realization(const SimulationSetting& setting,
                                         std::int64_t replicate_index) {
    const ReplicationResult r = simulate_replication(setting, replicate_index);
    std::vector<CurvePoint> points;
    for (std::size_t k = 0; k < r.kinds.size(); ++k) {
        std::vector<Probability> sorted = r.pvalues[k];
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            points.push_back({sorted[i],
                              static_cast<double>(i + 1) / static_cast<double>(sorted.size()),
                              r.kinds[k]});
    }
    return points;
}

namespace {

// Mean of P(per-study p-value <= x) over the positive / non-positive effect
// distributions of the setting.
double mean_prob_positive(double x, const SimulationSetting& st) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto f = [&](double theta) { return marginal_pvalue_cdf(x, theta, st.n); };
    return integrate(f, 0.0, st.mu_max, 1e-12) / st.mu_max;
}

double mean_prob_nonpositive(double x, const SimulationSetting& st) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (st.mu_min == 0.0) return x;  // point mass at zero: the p-value is uniform
    const double a = st.mu_min / std::sqrt(static_cast<double>(st.n));
    const auto f = [&](double theta) { return marginal_pvalue_cdf(x, theta, st.n); };
    return integrate(f, a, 0.0, 1e-12) / (-a);
}

// P(p^LFC <= t) for one endpoint class (true or false null), mixing the
// Poisson-binomial tail over the binomial positive-study count.
double class_prob_lfc_leq(double t, const SimulationSetting& st, bool true_null) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const int k = st.s - st.gamma + 1;
    const double x = 1.0 - std::pow(1.0 - t, 1.0 / static_cast<double>(k));
    const double q_pos = mean_prob_positive(x, st);
    const double q_neg = mean_prob_nonpositive(x, st);

    const int trials = true_null ? st.gamma - 1 : st.s - st.gamma;
    const double success = true_null ? st.p0 : st.p1;
    const int offset = true_null ? 0 : st.gamma;

    double prob = 0.0;
    std::vector<double> study_probs(static_cast<std::size_t>(st.s));
    for (int b = 0; b <= trials; ++b) {
        const double w = binomial_pmf(b, trials, success);
        if (w == 0.0) continue;
        const int positives = offset + b;
        for (int i = 0; i < st.s; ++i)
            study_probs[static_cast<std::size_t>(i)] = i < positives ? q_pos : q_neg;
        prob += w * poisson_binomial_tail(study_probs, st.gamma);
    }
    return prob;
}

double class_prob_rand_leq(double t, const SimulationSetting& st, bool true_null) {
    const ReplicabilityConfig config{st.s, st.gamma, 0.5};
    const double c = threshold_c(config);
    return t * (1.0 - class_prob_lfc_leq(c, st, true_null)) +
           class_prob_lfc_leq(t * c, st, true_null);
}

}  // namespace

namespace {

void require_oracle_support(const SimulationSetting& setting, PvalueKind kind,
                            const char* name) {
    setting.validate();
    if (setting.model != MarginalModelKind::z_known_unit_variance)
        throw std::invalid_argument(std::string(name) + ": only the Z model is supported");
    if (kind != PvalueKind::lfc && kind != PvalueKind::rand)
        throw std::invalid_argument(std::string(name) +
                                    ": only lfc and rand kinds are supported");
}

double class_prob_leq(double t, const SimulationSetting& setting, PvalueKind kind,
                      bool true_null) {
    return kind == PvalueKind::lfc ? class_prob_lfc_leq(t, setting, true_null)
                                   : class_prob_rand_leq(t, setting, true_null);
}

}  // namespace

double expectation_oracle(const SimulationSetting& setting, PvalueKind kind) {
    require_oracle_support(setting, kind, "expectation_oracle");
    const double mean_prob =
        setting.pi0 * class_prob_leq(setting.lambda, setting, kind, true) +
        (1.0 - setting.pi0) * class_prob_leq(setting.lambda, setting, kind, false);
    return (1.0 - mean_prob) / (1.0 - setting.lambda);
}

double estimator_std_oracle(const SimulationSetting& setting, PvalueKind kind) {
    require_oracle_support(setting, kind, "estimator_std_oracle");
    const double above_true = 1.0 - class_prob_leq(setting.lambda, setting, kind, true);
    const double above_false = 1.0 - class_prob_leq(setting.lambda, setting, kind, false);
    const double m0 = setting.m0();
    const double m1 = setting.m - setting.m0();
    const double count_var =
        m0 * above_true * (1.0 - above_true) + m1 * above_false * (1.0 - above_false);
    return std::sqrt(count_var) / (static_cast<double>(setting.m) * (1.0 - setting.lambda));
}

std::string table_csv(std::span<const TableCell> cells, std::string_view provenance) {
    std::ostringstream out;
    out << "# " << provenance << "\n";
    out << "gamma,pi0,mu_min,mu_max,kind,mean,std,mc_se,reps,seed\n";
    for (const TableCell& cell : cells) {
        out << cell.setting.gamma << ',' << shortest_double(cell.setting.pi0) << ','
            << shortest_double(cell.setting.mu_min) << ','
            << shortest_double(cell.setting.mu_max) << ',' << kind_name(cell.kind) << ','
            << shortest_double(cell.mean) << ',' << shortest_double(cell.std) << ','
            << shortest_double(cell.mc_standard_error) << ',' << cell.setting.reps << ','
            << cell.setting.seed << "\n";
    }
    return out.str();
}

std::string curve_csv(std::span<const CurvePoint> points, std::string_view t_column,
                      std::string_view provenance) {
    std::ostringstream out;
    out << "# " << provenance << "\n";
    out << t_column << ",value,kind\n";
    for (const CurvePoint& p : points)
        out << shortest_double(p.t) << ',' << shortest_double(p.value) << ','
            << kind_name(p.kind) << "\n";
    return out.str();
}

}  // namespace randpv
