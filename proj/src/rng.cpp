#include "randpv/rng.hpp"

#include <cmath>
#include <numbers>

namespace randpv {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream RandomStream::for_replicate(std::uint64_t master_seed,
                                         std::uint64_t replicate_index) {
    std::uint64_t state = master_seed ^ ((replicate_index + 1) * 0x9E3779B97F4A7C15ULL);
    splitmix64(state);
    return RandomStream(splitmix64(state));
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open_left();  // avoid log(0)
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

}  // namespace randpv
