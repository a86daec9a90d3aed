#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbsde {

/// Uniform time grid on [0, T] with N steps; t_k = k*dt, t_N pinned to T.
struct TimeGrid {
    double horizon = 0.0;
    int steps = 0;

    double dt() const { return horizon / steps; }
    double time(int k) const { return k == steps ? horizon : k * dt(); }
    int points() const { return steps + 1; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

TimeGrid make_uniform_grid(double horizon, int steps);

/// Real values on the nodes of a TimeGrid; immutable after construction.
class DiscretePath {
  public:
    DiscretePath(TimeGrid grid, std::vector<double> values);

    const TimeGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }

  private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Parametric boundary curve sampled at grid times.
struct BarrierSpec {
    enum class Kind { constant, affine, sinusoid };

    Kind kind = Kind::constant;
    std::vector<double> params;

    static BarrierSpec constant(double c) { return {Kind::constant, {c}}; }
    // a + b*t
    static BarrierSpec affine(double a, double b) { return {Kind::affine, {a, b}}; }
    // a + b*sin(c*t)
    static BarrierSpec sinusoid(double a, double b, double c) {
        return {Kind::sinusoid, {a, b, c}};
    }

    double operator()(double t) const;
};

/// Lower/upper boundary pair with a strictly positive gap at every node.
struct BarrierPair {
    DiscretePath lower;
    DiscretePath upper;
    double min_gap = 0.0;
};

BarrierPair eval_barriers(const BarrierSpec& low, const BarrierSpec& high,
                          const TimeGrid& grid);

/// Builds the pair from explicit paths; rejects nonpositive gaps.
BarrierPair make_barrier_pair(DiscretePath lower, DiscretePath upper);

double sup_norm_distance(const DiscretePath& p, const DiscretePath& q);

/// Output index j holds input value N-j; an involution.
DiscretePath reverse_in_time(const DiscretePath& p);

BarrierPair reverse_in_time(const BarrierPair& b);

}  // namespace rbsde
