#include "rbsde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rbsde/kernels.hpp"

namespace rbsde {

TimeGrid make_uniform_grid(double horizon, int steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("make_uniform_grid: horizon must be positive");
    }
    if (steps < 1) {
        throw std::invalid_argument("make_uniform_grid: steps must be >= 1");
    }
    return TimeGrid{horizon, steps};
}

DiscretePath::DiscretePath(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(grid_.points())) {
        throw std::invalid_argument("DiscretePath: value count must be steps + 1");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("DiscretePath: values must be finite");
        }
    }
}

double BarrierSpec::operator()(double t) const {
    switch (kind) {
        case Kind::constant:
            if (params.size() != 1)
                throw std::invalid_argument("constant barrier needs 1 parameter");
            return params[0];
        case Kind::affine:
            if (params.size() != 2)
                throw std::invalid_argument("affine barrier needs 2 parameters");
            return params[0] + params[1] * t;
        case Kind::sinusoid:
            if (params.size() != 3)
                throw std::invalid_argument("sinusoid barrier needs 3 parameters");
            return params[0] + params[1] * std::sin(params[2] * t);
    }
    throw std::logic_error("BarrierSpec: unknown kind");
}

BarrierPair eval_barriers(const BarrierSpec& low, const BarrierSpec& high,
                          const TimeGrid& grid) {
    std::vector<double> lo(grid.points()), hi(grid.points());
    for (int k = 0; k <= grid.steps; ++k) {
        const double t = grid.time(k);
        lo[k] = low(t);
        hi[k] = high(t);
    }
    return make_barrier_pair(DiscretePath(grid, std::move(lo)),
                             DiscretePath(grid, std::move(hi)));
}

BarrierPair make_barrier_pair(DiscretePath lower, DiscretePath upper) {
    if (lower.grid() != upper.grid()) {
        throw std::invalid_argument("make_barrier_pair: grid mismatch");
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lower.size(); ++k) {
        gap = std::min(gap, upper[k] - lower[k]);
    }
    if (!(gap > 0.0)) {
        throw std::invalid_argument(
            "make_barrier_pair: barrier gap must be strictly positive "
            "(min gap = " + std::to_string(gap) + ")");
    }
    return BarrierPair{std::move(lower), std::move(upper), gap};
}

double sup_norm_distance(const DiscretePath& p, const DiscretePath& q) {
    if (p.grid() != q.grid()) {
        throw std::invalid_argument("sup_norm_distance: grid mismatch");
    }
    return kernels::max_abs_diff(p.values(), q.values());
}

DiscretePath reverse_in_time(const DiscretePath& p) {
    std::vector<double> rev(p.values().rbegin(), p.values().rend());
    return DiscretePath(p.grid(), std::move(rev));
}

BarrierPair reverse_in_time(const BarrierPair& b) {
    return BarrierPair{reverse_in_time(b.lower), reverse_in_time(b.upper),
                       b.min_gap};
}

}  // namespace rbsde
