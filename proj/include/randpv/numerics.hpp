#pragma once

#include <span>

namespace randpv {

/// A probability. Carried as a plain double; functions taking a Probability
/// validate the [0,1] range and throw std::domain_error instead of clamping.
using Probability = double;

/// Throws std::domain_error unless 0 <= p <= 1 and p is finite.
void require_probability(Probability p, const char* name);

/// Standard normal cumulative distribution function Phi(x).
/// Computed through erfc; absolute error below 1e-12 over the real line.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), computed directly for accuracy at large x.
double std_normal_survival(double x);

/// Inverse of std_normal_cdf for p in (0,1). Rational initial guess plus one
/// Halley refinement; round-trips through the cdf to ~1e-15.
double std_normal_quantile(Probability p);

/// Central Student t cumulative distribution function with df >= 1 degrees
/// of freedom, via the regularized incomplete beta function.
Probability student_t_cdf(double x, int df);

/// Beta(k,1) cdf: t^k on [0,1].
Probability beta_k1_cdf(Probability t, int k);

/// Beta(k,1) quantile: p^(1/k) on [0,1].
Probability beta_k1_quantile(Probability p, int k);

/// Chi-square cdf with df >= 1 degrees of freedom (regularized lower
/// incomplete gamma).
Probability chi_square_cdf(double x, int df);

/// Upper tail of the chi-square distribution, computed directly.
Probability chi_square_survival(double x, int df);

/// Chi-square quantile for p in (0,1); bracketed root-find on the cdf,
/// round-trip error below 1e-8.
double chi_square_quantile(Probability p, int df);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma function P(a, x).
double regularized_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x).
double regularized_upper_gamma(double a, double x);

/// P(at least k successes) for independent Bernoulli trials with the given
/// success probabilities (Poisson-binomial tail). Exact O(n^2) dynamic
/// program; k <= 0 yields 1, k > n yields 0.
double poisson_binomial_tail(std::span<const double> probs, int k);

}  // namespace randpv
