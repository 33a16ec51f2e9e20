#include <doctest.h>

#include <cmath>
#include <vector>

#include "randpv/config.hpp"
#include "randpv/errors.hpp"
#include "randpv/simulation.hpp"
#include "test_util.hpp"

using namespace randpv;

namespace {

SimulationSetting table_setting(int gamma, double pi0, double mu_min, double mu_max) {
    SimulationSetting s;
    s.m = 100;
    s.s = 10;
    s.gamma = gamma;
    s.pi0 = pi0;
    s.mu_min = mu_min;
    s.mu_max = mu_max;
    s.n = 50;
    s.lambda = 0.5;
    return s;
}

}  // namespace

TEST_CASE("setting validation") {
    SimulationSetting s = table_setting(6, 0.7, 0.0, 2.0);
    CHECK_NOTHROW(s.validate());
    CHECK(s.m0() == 70);
    s.pi0 = 0.715;  // m * pi0 not an integer
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.pi0 = 0.7;
    s.gamma = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.gamma = 6;
    s.mu_min = 0.2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.mu_min = 0.0;
    s.kinds = {PvalueKind::lfc, PvalueKind::lfc};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("effect matrix honours the truth invariant") {
    SimulationSetting s = table_setting(6, 0.7, -1.0, 4.0);
    RandomStream rng(40);
    const EffectMatrix em = draw_effect_matrix(s, rng);
    REQUIRE(em.m == s.m);
    REQUIRE(em.s == s.s);
    for (int j = 0; j < em.m; ++j) {
        int positives = 0;
        for (int i = 0; i < em.s; ++i) {
            const double theta = em.at(i, j);
            if (theta > 0.0) {
                ++positives;
                CHECK(theta <= s.mu_max);
            } else {
                CHECK(theta >= s.mu_min / std::sqrt(50.0));
            }
        }
        CHECK(em.truth[static_cast<std::size_t>(j)] == (positives < s.gamma));
        CHECK((j < s.m0()) == (positives < s.gamma));
    }
}

TEST_CASE("all columns are true nulls when pi0 = 1") {
    SimulationSetting s = table_setting(4, 1.0, -0.5, 3.0);
    RandomStream rng(41);
    const EffectMatrix em = draw_effect_matrix(s, rng);
    for (int j = 0; j < em.m; ++j) {
        int positives = 0;
        for (int i = 0; i < em.s; ++i)
            if (em.at(i, j) > 0.0) ++positives;
        CHECK(positives < s.gamma);
    }
}

TEST_CASE("gamma = s forces every study positive in false-null columns") {
    SimulationSetting s = table_setting(10, 0.5, -0.5, 3.0);
    RandomStream rng(42);
    const EffectMatrix em = draw_effect_matrix(s, rng);
    for (int j = s.m0(); j < em.m; ++j)
        for (int i = 0; i < em.s; ++i) CHECK(em.at(i, j) > 0.0);
}

TEST_CASE("positive-study count follows the stated binomial law") {
    // For true nulls with gamma = 6 the count of positives is
    // Binomial(5, 0.8); its mass at 5 is 0.8^5 = 0.32768.
    SimulationSetting s = table_setting(6, 1.0, -1.0, 4.0);
    s.m = 100000;
    RandomStream rng(43);
    const EffectMatrix em = draw_effect_matrix(s, rng);
    int at_full = 0;
    for (int j = 0; j < em.m; ++j) {
        int positives = 0;
        for (int i = 0; i < em.s; ++i)
            if (em.at(i, j) > 0.0) ++positives;
        if (positives == 5) ++at_full;
    }
    const double expected = std::pow(0.8, 5);
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(s.m));
    CHECK(std::fabs(static_cast<double>(at_full) / s.m - expected) < 3.0 * sigma);
}

TEST_CASE("replicates are deterministic in (seed, index)") {
    SimulationSetting s = table_setting(6, 0.7, -1.0, 4.0);
    s.kinds = {PvalueKind::lfc, PvalueKind::rand, PvalueKind::stouffer, PvalueKind::fisher};
    const ReplicationResult a = simulate_replication(s, 7);
    const ReplicationResult b = simulate_replication(s, 7);
    REQUIRE(a.pvalues.size() == b.pvalues.size());
    for (std::size_t k = 0; k < a.pvalues.size(); ++k) {
        CHECK(a.pvalues[k] == b.pvalues[k]);
        CHECK(a.estimates[k].value == b.estimates[k].value);
    }
    const ReplicationResult c = simulate_replication(s, 8);
    CHECK(a.pvalues[0] != c.pvalues[0]);
}

TEST_CASE("data draws do not depend on the requested kinds") {
    SimulationSetting s = table_setting(4, 0.6, -0.5, 3.0);
    SimulationSetting lfc_only = s;
    lfc_only.kinds = {PvalueKind::lfc};
    const ReplicationResult full = simulate_replication(s, 3);
    const ReplicationResult lean = simulate_replication(lfc_only, 3);
    CHECK(full.pvalues[0] == lean.pvalues[0]);
}

TEST_CASE("run_table output is identical for any worker count") {
    SimulationSetting s = table_setting(6, 0.7, 0.0, 2.0);
    s.reps = 200;
    const std::vector<SimulationSetting> grid{s};
    const auto serial = run_table(grid, 1);
    const auto threaded = run_table(grid, 3);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].mean == threaded[i].mean);
        CHECK(serial[i].std == threaded[i].std);
    }
    CHECK(table_csv(serial, "check") == table_csv(threaded, "check"));
}

TEST_CASE("oracle reproduces published expectations") {
    // analytic reference values for the lambda = 1/2 expectation
    CHECK(std::fabs(expectation_oracle(table_setting(2, 0.6, 0.0, 2.0), PvalueKind::lfc) -
                    0.71623177) < 1e-6);
    CHECK(std::fabs(expectation_oracle(table_setting(2, 0.6, 0.0, 2.0), PvalueKind::rand) -
                    0.7148753) < 1e-6);
    CHECK(std::fabs(expectation_oracle(table_setting(10, 0.9, -1.5, 5.0), PvalueKind::lfc) -
                    1.72884345) < 1e-6);
    CHECK(std::fabs(expectation_oracle(table_setting(10, 0.9, -1.5, 5.0), PvalueKind::rand) -
                    0.95425703) < 1e-6);
}

TEST_CASE("oracle rejects the t model") {
    SimulationSetting s = table_setting(6, 0.7, 0.0, 2.0);
    s.model = MarginalModelKind::t_unknown_variance;
    CHECK_THROWS_AS((void)expectation_oracle(s, PvalueKind::lfc), std::invalid_argument);
}

TEST_CASE("monte carlo means and spreads agree with the oracle") {
    SimulationSetting s = table_setting(6, 0.7, -1.0, 4.0);
    s.reps = 4000;
    s.seed = 1234;
    const auto cells = run_table(std::vector<SimulationSetting>{s}, 0);
    REQUIRE(cells.size() == 2);
    for (const TableCell& cell : cells) {
        const double oracle = expectation_oracle(s, cell.kind);
        CHECK(std::fabs(cell.mean - oracle) < 3.0 * cell.mc_standard_error);
        CHECK(std::fabs(cell.std - estimator_std_oracle(s, cell.kind)) < 0.004);
    }
}

TEST_CASE("exact estimator standard deviations") {
    // independent quadrature + binomial-count reference values
    CHECK(std::fabs(estimator_std_oracle(table_setting(2, 0.6, 0.0, 2.0), PvalueKind::lfc) -
                    0.075994) < 5e-6);
    CHECK(std::fabs(estimator_std_oracle(table_setting(2, 0.6, 0.0, 2.0), PvalueKind::rand) -
                    0.076028) < 5e-6);
    CHECK(std::fabs(estimator_std_oracle(table_setting(10, 0.6, -1.5, 5.0), PvalueKind::rand) -
                    0.090037) < 5e-6);
}

TEST_CASE("degenerate all-null setting") {
    // All effects exactly zero: per-study p-values are uniform. The lfc
    // expectation has the closed form (1 - lambda^s) / (1 - lambda) at
    // gamma = s, and the randomized expectation sits within a whisker of 1.
    SimulationSetting s = table_setting(10, 1.0, 0.0, 2.0);
    s.p0 = 0.0;
    const double lfc = expectation_oracle(s, PvalueKind::lfc);
    CHECK(std::fabs(lfc - (1.0 - std::pow(0.5, 10)) / 0.5) < 1e-9);
    const double rand = expectation_oracle(s, PvalueKind::rand);
    CHECK(std::fabs(rand - 1.0) < 2e-3);

    s.reps = 1000;
    s.seed = 99;
    s.kinds = {PvalueKind::rand};
    const auto cells = run_table(std::vector<SimulationSetting>{s}, 0);
    CHECK(std::fabs(cells[0].mean - 1.0) < 3.0 * cells[0].mc_standard_error + 2e-3);
}

TEST_CASE("lambda sweep matches the single-lambda table") {
    SimulationSetting s = table_setting(8, 0.6, -2.0, 4.0);
    s.reps = 300;
    const std::vector<double> lambdas{0.3, 0.5};
    const auto points = run_lambda_sweep(s, lambdas, 2);
    REQUIRE(points.size() == 4);
    SimulationSetting at_half = s;
    at_half.lambda = 0.5;
    const auto cells = run_table(std::vector<SimulationSetting>{at_half}, 2);
    for (const CurvePoint& p : points)
        if (p.t == 0.5 && p.kind == PvalueKind::lfc) CHECK(p.value == cells[0].mean);
}

TEST_CASE("ecdf realization favours the randomized p-values") {
    SimulationSetting s = table_setting(6, 0.7, -2.5, 1.5);
    s.m = 500;
    const auto points = ecdf_realization(s, 0);
    REQUIRE(points.size() == 2 * 500);
    // value of each empirical cdf at t = 0.5 against the reference line
    // connecting (0, 1 - pi0) and (1, 1)
    double lfc_at_half = 0.0, rand_at_half = 0.0;
    for (const CurvePoint& p : points) {
        if (p.t > 0.5) continue;
        (p.kind == PvalueKind::lfc ? lfc_at_half : rand_at_half) = p.value;
    }
    const double reference = 0.3 + 0.7 * 0.5;
    CHECK(std::fabs(rand_at_half - reference) < std::fabs(lfc_at_half - reference));
}

TEST_CASE("grid configuration parsing") {
    const std::string text = R"(# demo grid
m = 100
s = 10
n = 50
reps = 500
seed = 7
lambda = 0.5
kinds = lfc, rand
gamma = 2, 6
pi0 = 0.6, 0.9
mu_min = 0, -1.5
mu_max = 2, 5
)";
    const auto grid = parse_table_grid(text);
    REQUIRE(grid.size() == 8);  // gamma x mu pair x pi0
    CHECK(grid[0].gamma == 2);
    CHECK(grid[0].mu_min == 0.0);
    CHECK(grid[0].pi0 == 0.6);
    CHECK(grid[1].pi0 == 0.9);
    CHECK(grid[2].mu_min == -1.5);
    CHECK(grid[2].mu_max == 5.0);
    CHECK(grid[4].gamma == 6);
    CHECK(grid[0].seed == 7);
    CHECK(grid[0].kinds.size() == 2);

    CHECK_THROWS_AS((void)parse_table_grid("bogus = 1\n"), data_error);
    CHECK_THROWS_AS((void)parse_table_grid("mu_min = 0, 1\nmu_max = 2\n"), data_error);
    CHECK_THROWS_AS((void)parse_table_grid("m = 100\nm = 50\n"), data_error);
}
