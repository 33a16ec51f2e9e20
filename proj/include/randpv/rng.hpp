#pragma once

#include <cstdint>
#include <random>

namespace randpv {

/// One round of the splitmix64 output function; used to spread seed material.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic random stream with a fully specified draw sequence:
/// mt19937_64 underneath, uniforms as 53-bit mantissa draws in [0,1), and
/// normals by the trigonometric Box-Muller transform with a cached spare.
/// Streams for Monte Carlo replicates are derived from (seed, replicate)
/// by two splitmix64 rounds over seed XOR (replicate+1)*golden-gamma, so
/// results never depend on scheduling or worker count.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream for_replicate(std::uint64_t master_seed, std::uint64_t replicate_index);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0,1].
    double uniform_open_left() { return 1.0 - uniform(); }

    /// Standard normal.
    double normal();

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace randpv
