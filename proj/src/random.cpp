#include "rbsde/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace rbsde {

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform01_open_low() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Rng Rng::for_index(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0x632be59bd9b4e019ull * (index + 1)));
    return Rng(mixer.next_u64());
}

DiscretePath random_zigzag(const BarrierPair& barriers, double amplitude_factor,
                           Rng& rng) {
    const TimeGrid& grid = barriers.lower.grid();
    const int n = grid.steps;

    double lo_min = barriers.lower[0], hi_max = barriers.upper[0];
    for (int k = 1; k <= n; ++k) {
        lo_min = std::min(lo_min, barriers.lower[k]);
        hi_max = std::max(hi_max, barriers.upper[k]);
    }
    const double amplitude = amplitude_factor * (hi_max - lo_min);

    std::vector<double> values(n + 1);
    const double inner = barriers.upper[0] - barriers.lower[0];
    values[0] = barriers.lower[0] + inner * rng.uniform(0.05, 0.95);
    for (int k = 1; k <= n; ++k) {
        values[k] = values[k - 1] + rng.uniform(-amplitude, amplitude);
    }
    return DiscretePath(grid, std::move(values));
}

DiscretePath random_walk(const TimeGrid& grid, double start, Rng& rng) {
    const double sigma = std::sqrt(grid.dt());
    std::vector<double> values(grid.points());
    values[0] = start;
    for (int k = 1; k <= grid.steps; ++k) {
        values[k] = values[k - 1] + sigma * rng.normal();
    }
    return DiscretePath(grid, std::move(values));
}

}  // namespace rbsde
