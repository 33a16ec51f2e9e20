#include "randpv/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace randpv {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

[[noreturn]] void domain_fail(const std::string& msg) { throw std::domain_error(msg); }

// Continued fraction for the incomplete beta function, modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 4000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    domain_fail("incomplete beta continued fraction failed to converge");
}

// Series for P(a,x), valid for x < a + 1.
double lower_gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 1; n <= 2000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    domain_fail("incomplete gamma series failed to converge");
}

// Continued fraction for Q(a,x), valid for x >= a + 1. Modified Lentz.
double upper_gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 2000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    domain_fail("incomplete gamma continued fraction failed to converge");
}

}  // namespace

void require_probability(Probability p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        domain_fail(std::string(name) + " must lie in [0,1]");
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) domain_fail("std_normal_cdf: non-finite input");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_survival(double x) {
    if (!std::isfinite(x)) domain_fail("std_normal_survival: non-finite input");
    return 0.5 * std::erfc(x / kSqrt2);
}

double std_normal_quantile(Probability p) {
    require_probability(p, "std_normal_quantile: p");
    if (p <= 0.0 || p >= 1.0)
        domain_fail("std_normal_quantile: p must lie strictly inside (0,1)");

    // Acklam's rational approximation, then one Halley step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement against the erfc-based cdf.
    const double err = std_normal_cdf(x) - p;
    const double u = err * kSqrt2Pi * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

Probability student_t_cdf(double x, int df) {
    if (df < 1) domain_fail("student_t_cdf: df must be >= 1");
    if (!std::isfinite(x)) domain_fail("student_t_cdf: non-finite input");
    const double nu = df;
    const double w = nu / (nu + x * x);
    const double half_tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, w);
    return x > 0.0 ? 1.0 - half_tail : half_tail;
}

Probability beta_k1_cdf(Probability t, int k) {
    require_probability(t, "beta_k1_cdf: t");
    if (k < 1) domain_fail("beta_k1_cdf: k must be >= 1");
    return std::pow(t, static_cast<double>(k));
}

Probability beta_k1_quantile(Probability p, int k) {
    require_probability(p, "beta_k1_quantile: p");
    if (k < 1) domain_fail("beta_k1_quantile: k must be >= 1");
    if (p == 0.0) return 0.0;
    return std::pow(p, 1.0 / static_cast<double>(k));
}

Probability chi_square_cdf(double x, int df) {
    if (df < 1) domain_fail("chi_square_cdf: df must be >= 1");
    if (!std::isfinite(x)) domain_fail("chi_square_cdf: non-finite input");
    if (x <= 0.0) return 0.0;
    return regularized_lower_gamma(df / 2.0, x / 2.0);
}

Probability chi_square_survival(double x, int df) {
    if (df < 1) domain_fail("chi_square_survival: df must be >= 1");
    if (!std::isfinite(x)) domain_fail("chi_square_survival: non-finite input");
    if (x <= 0.0) return 1.0;
    return regularized_upper_gamma(df / 2.0, x / 2.0);
}

double chi_square_quantile(Probability p, int df) {
    require_probability(p, "chi_square_quantile: p");
    if (df < 1) domain_fail("chi_square_quantile: df must be >= 1");
    if (p <= 0.0 || p >= 1.0)
        domain_fail("chi_square_quantile: p must lie strictly inside (0,1)");

    double lo = 0.0;
    double hi = df + 10.0 * std::sqrt(2.0 * df) + 10.0;
    while (chi_square_cdf(hi, df) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (chi_square_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) domain_fail("regularized_incomplete_beta: a,b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) domain_fail("regularized_incomplete_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0)) domain_fail("regularized_lower_gamma: a must be > 0");
    if (x < 0.0) domain_fail("regularized_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_cf(a, x);
}

double regularized_upper_gamma(double a, double x) {
    if (!(a > 0.0)) domain_fail("regularized_upper_gamma: a must be > 0");
    if (x < 0.0) domain_fail("regularized_upper_gamma: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - lower_gamma_series(a, x);
    return upper_gamma_cf(a, x);
}

double poisson_binomial_tail(std::span<const double> probs, int k) {
    const int n = static_cast<int>(probs.size());
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    for (double p : probs) require_probability(p, "poisson_binomial_tail: probability");

    std::vector<double> dp(static_cast<std::size_t>(n) + 1, 0.0);
    dp[0] = 1.0;
    int filled = 0;
    for (double p : probs) {
        ++filled;
        for (int j = filled; j >= 1; --j) dp[j] = dp[j] * (1.0 - p) + dp[j - 1] * p;
        dp[0] *= 1.0 - p;
    }
    double tail = 0.0;
    for (int j = n; j >= k; --j) tail += dp[j];
    return tail < 0.0 ? 0.0 : (tail > 1.0 ? 1.0 : tail);
}

}  // namespace randpv
