#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "randpv/pi0.hpp"
#include "randpv/rng.hpp"

using namespace randpv;

TEST_CASE("ecdf") {
    const std::vector<double> values{0.1, 0.2, 0.6, 0.9};
    CHECK(ecdf(values, 0.5) == 0.5);
    CHECK(ecdf(values, 1.0) == 1.0);
    const std::vector<double> single{0.5};
    CHECK(ecdf(single, 0.5) == 1.0);  // "<=" convention
    CHECK_THROWS_AS((void)ecdf(std::vector<double>{}, 0.5), std::domain_error);
}

TEST_CASE("schweder-spjotvoll estimator") {
    const std::vector<double> values{0.1, 0.2, 0.6, 0.9};
    const Pi0Estimate est = schweder_spjotvoll(values, 0.5);
    CHECK(est.value == 1.0);
    CHECK(est.count_above == 2);
    CHECK(est.m == 4);

    // estimates above 1 are intentionally reported as-is
    const std::vector<double> ones(8, 1.0);
    CHECK(schweder_spjotvoll(ones, 0.5).value == 2.0);

    CHECK_THROWS_AS((void)schweder_spjotvoll(values, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)schweder_spjotvoll(std::vector<double>{}, 0.5), std::domain_error);

    // exact count identity
    RandomStream rng(13);
    std::vector<double> pvalues(997);
    for (double& p : pvalues) p = rng.uniform();
    for (double lambda : {0.0, 0.3, 0.77}) {
        const Pi0Estimate e = schweder_spjotvoll(pvalues, lambda);
        int count = 0;
        for (double p : pvalues)
            if (p > lambda) ++count;
        CHECK(e.count_above == count);
        CHECK(e.value == static_cast<double>(count) / (997.0 * (1.0 - lambda)));
    }
}

TEST_CASE("estimator is permutation invariant") {
    RandomStream rng(17);
    std::vector<double> pvalues(101);
    for (double& p : pvalues) p = rng.uniform();
    const double before = schweder_spjotvoll(pvalues, 0.4).value;
    std::sort(pvalues.begin(), pvalues.end());
    CHECK(schweder_spjotvoll(pvalues, 0.4).value == before);
}

TEST_CASE("lambda sweep") {
    RandomStream rng(19);
    std::vector<double> pvalues(100000);
    for (double& p : pvalues) p = rng.uniform();

    std::vector<double> lambdas;
    for (double l = 0.1; l < 0.95; l += 0.1) lambdas.push_back(l);
    const std::vector<Pi0Estimate> sweep = lambda_sweep(pvalues, lambdas);
    REQUIRE(sweep.size() == lambdas.size());
    for (const Pi0Estimate& est : sweep) CHECK(std::fabs(est.value - 1.0) < 0.05);

    CHECK(lambda_sweep(pvalues, std::vector<double>{}).empty());

    const std::vector<double> tiny{0.0, 0.4, 0.9};
    const auto at_zero = lambda_sweep(tiny, std::vector<double>{0.0});
    REQUIRE(at_zero.size() == 1);
    CHECK(at_zero[0].value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}
