#pragma once

#include <limits>
#include <utility>

#include "rbsde/grid.hpp"

namespace rbsde {

/// First grid indices (k >= 1) at which the path touches or crosses a boundary.
struct HittingIndices {
    static constexpr int kNever = std::numeric_limits<int>::max();

    int lower_contact = kNever;  // min{k >= 1 : lower_k - x_k >= 0}
    int upper_contact = kNever;  // min{k >= 1 : x_k - upper_k >= 0}
};

/**
 * Two-sided reflection of a path: y stays inside the boundaries, pushed by a
 * regulator eta = y - x of bounded variation split into one-sided
 * nondecreasing parts that act only at boundary contact.
 */
struct Reflection {
    DiscretePath reflected;   // y
    DiscretePath xi;          // x - y (the regulator functional)
    DiscretePath regulator;   // eta = y - x = -xi
    DiscretePath lower_push;  // cumulative nondecreasing lower part of eta
    DiscretePath upper_push;  // cumulative nondecreasing upper part of eta
};

/// Requires the path to start strictly inside the boundaries.
HittingIndices hitting_times(const DiscretePath& x, const BarrierPair& b);

/// max over s <= t of min((x_s - upper_s), min over r in [s, t] of (x_r - lower_r))
double max_min_functional(const DiscretePath& x, const BarrierPair& b, int t);

/// min over s <= t of max((x_s - lower_s), max over r in [s, t] of (x_r - upper_r))
double min_max_functional(const DiscretePath& x, const BarrierPair& b, int t);

/**
 * Regulator functional of the two-sided map via the explicit max/min formula,
 * with the positive part applied to the initial term only. The one-sided
 * degenerate cases then collapse to the classical single-boundary map.
 */
DiscretePath regulator_max_formula(const DiscretePath& x, const BarrierPair& b);

/**
 * Equivalent regulator via first-contact branch classification: once the path
 * first touches a boundary, the matching max-min (upper first) or min-max
 * (lower first) functional takes over. Requires a strictly interior start.
 */
DiscretePath regulator_branch_formula(const DiscretePath& x, const BarrierPair& b);

/**
 * Step-by-step projection: clamp the start, then propagate increments and
 * clamp at each node, recording one-sided pushes. Contact values are assigned
 * exactly, so the flat-off sums vanish identically.
 */
Reflection step_projection(const DiscretePath& x, const BarrierPair& b);

/**
 * Allocation-free core of step_projection over raw spans (all of size N+1);
 * `low_push`/`up_push` receive the cumulative one-sided parts. The solver's
 * per-path loop and step_projection share this recursion.
 */
void step_projection_core(std::span<const double> x,
                          std::span<const double> lower,
                          std::span<const double> upper, std::span<double> y,
                          std::span<double> low_push, std::span<double> up_push);

/// Full reflection output: xi from the max formula, pushes from step_projection.
Reflection reflect(const DiscretePath& x, const BarrierPair& b);

/**
 * Flat-off residuals (upper, lower):
 *   sum_k (upper_k - y_k) * d(upper_push)_k  and  sum_k (y_k - lower_k) * d(lower_push)_k.
 * Both vanish when pushes act only at exact contact.
 */
std::pair<double, double> flat_off_residuals(const Reflection& r,
                                             const BarrierPair& b);

/// ||x - x'||_inf - ||reflect(x) - reflect(x')||_inf; nonnegative by contraction.
double lipschitz_gap(const DiscretePath& x, const DiscretePath& x2,
                     const BarrierPair& b);

}  // namespace rbsde
