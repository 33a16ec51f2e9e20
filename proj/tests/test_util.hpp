#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace randpv::testutil {

// One-sided DKW band half-width for confidence 1 - alpha.
inline double dkw_epsilon(std::size_t n, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

// Kolmogorov-Smirnov distance of a sample against the uniform cdf on [0,1].
inline double ks_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - sample[i];
        const double lo = sample[i] - static_cast<double>(i) / n;
        sup = std::max({sup, hi, lo});
    }
    return sup;
}

// Fraction of sorted sample values <= t.
inline double ecdf_sorted(std::span<const double> sorted, double t) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

inline std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

}  // namespace randpv::testutil
