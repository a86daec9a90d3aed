#pragma once

#include <utility>

#include "rbsde/grid.hpp"

namespace rbsde {

enum class LocalTimeSource { tanaka, occupation };

/// Estimated boundary local time of a nonnegative path at level 0.
struct LocalTimeEstimate {
    DiscretePath path;
    double threshold = 0.0;
    LocalTimeSource source = LocalTimeSource::tanaka;

    /// Local time is increasing; small discrete violations are tolerated.
    bool nondecreasing_within(double tol = 1e-9) const;
};

/**
 * Discrete Tanaka estimate of the local time of S at 0:
 *   L_k = S_k^- - S_0^- + sum_{j<k} 1{S_j <= eps} (S_{j+1} - S_j).
 */
LocalTimeEstimate tanaka_local_time(const DiscretePath& s, double eps);

/**
 * Reconstruction of the reflection process K of the two-barrier backward
 * equation from boundary local times and boundary occupation:
 *   K = -(contact f and boundary-increment sums) + L^{U-Y} - L^{Y-L},
 * with |.| <= eps as the discrete contact indicator. Requires Y to lie
 * between the boundaries within eps.
 */
DiscretePath reflection_from_local_times(const DiscretePath& y,
                                         const BarrierPair& b,
                                         const DiscretePath& fvals, double eps);

/**
 * One-sided reconstructions; their difference equals
 * reflection_from_local_times exactly (shared sums). The sign orientation of
 * each piece follows the combined formula and is reported as computed.
 */
std::pair<DiscretePath, DiscretePath> one_sided_reflection_terms(
    const DiscretePath& y, const BarrierPair& b, const DiscretePath& fvals,
    double eps);

}  // namespace rbsde
