#pragma once

#include <cstdint>

#include "rbsde/grid.hpp"

namespace rbsde {

/**
 * Deterministic generator with a fixed bit-level contract: splitmix64 state
 * advance, 53-bit uniforms, Box-Muller normals. The standard-library
 * distributions are implementation-defined, which would break byte-identical
 * outputs across toolchains.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform01();
    /// Uniform on (0, 1].
    double uniform01_open_low();
    double uniform(double lo, double hi);
    double normal();

    /// Independent stream for item `index` under a run-level seed.
    static Rng for_index(std::uint64_t seed, std::uint64_t index);

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/**
 * Piecewise-linear zigzag with uniform increments scaled to straddle both
 * boundaries, starting strictly inside them.
 */
DiscretePath random_zigzag(const BarrierPair& barriers, double amplitude_factor,
                           Rng& rng);

/// Gaussian random walk: x_0 = start, increments ~ N(0, dt).
DiscretePath random_walk(const TimeGrid& grid, double start, Rng& rng);

}  // namespace rbsde
