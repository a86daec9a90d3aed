#include "rbsde/skorohod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rbsde {

namespace {

void require_same_grid(const DiscretePath& x, const BarrierPair& b,
                       const char* who) {
    if (x.grid() != b.lower.grid()) {
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
    }
}

}  // namespace

HittingIndices hitting_times(const DiscretePath& x, const BarrierPair& b) {
    require_same_grid(x, b, "hitting_times");
    if (!(b.lower[0] < x[0] && x[0] < b.upper[0])) {
        throw std::domain_error(
            "hitting_times: path must start strictly inside the boundaries");
    }
    HittingIndices h;
    const int n = x.grid().steps;
    for (int k = 1; k <= n; ++k) {
        if (h.lower_contact == HittingIndices::kNever && b.lower[k] - x[k] >= 0.0) {
            h.lower_contact = k;
        }
        if (h.upper_contact == HittingIndices::kNever && x[k] - b.upper[k] >= 0.0) {
            h.upper_contact = k;
        }
    }
    if (h.lower_contact == h.upper_contact &&
        h.lower_contact != HittingIndices::kNever) {
        // Impossible for a positive gap; simultaneous contact means bad inputs.
        throw std::logic_error("hitting_times: simultaneous boundary contact");
    }
    return h;
}

double max_min_functional(const DiscretePath& x, const BarrierPair& b, int t) {
    require_same_grid(x, b, "max_min_functional");
    if (t < 0 || t > x.grid().steps) {
        throw std::invalid_argument("max_min_functional: index out of range");
    }
    // Scan s downward keeping the running min of (x_r - lower_r), r in [s, t].
    double run_min = std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    for (int s = t; s >= 0; --s) {
        run_min = std::min(run_min, x[s] - b.lower[s]);
        best = std::max(best, std::min(x[s] - b.upper[s], run_min));
    }
    return best;
}

double min_max_functional(const DiscretePath& x, const BarrierPair& b, int t) {
    require_same_grid(x, b, "min_max_functional");
    if (t < 0 || t > x.grid().steps) {
        throw std::invalid_argument("min_max_functional: index out of range");
    }
    double run_max = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int s = t; s >= 0; --s) {
        run_max = std::max(run_max, x[s] - b.upper[s]);
        best = std::min(best, std::max(x[s] - b.lower[s], run_max));
    }
    return best;
}

DiscretePath regulator_max_formula(const DiscretePath& x, const BarrierPair& b) {
    require_same_grid(x, b, "regulator_max_formula");
    const int n = x.grid().steps;
    std::vector<double> xi(n + 1);
    const double head = std::max(x[0] - b.upper[0], 0.0);
    double run_min_low = std::numeric_limits<double>::infinity();
    for (int t = 0; t <= n; ++t) {
        run_min_low = std::min(run_min_low, x[t] - b.lower[t]);
        const double initial_term = std::min(head, run_min_low);
        xi[t] = std::max(initial_term, max_min_functional(x, b, t));
    }
    return DiscretePath(x.grid(), std::move(xi));
}

DiscretePath regulator_branch_formula(const DiscretePath& x,
                                      const BarrierPair& b) {
    const HittingIndices h = hitting_times(x, b);
    const int n = x.grid().steps;
    std::vector<double> xi(n + 1, 0.0);
    if (h.upper_contact < h.lower_contact) {
        for (int t = h.upper_contact; t <= n; ++t) {
            xi[t] = max_min_functional(x, b, t);
        }
    } else if (h.lower_contact < h.upper_contact) {
        for (int t = h.lower_contact; t <= n; ++t) {
            xi[t] = min_max_functional(x, b, t);
        }
    }
    return DiscretePath(x.grid(), std::move(xi));
}

void step_projection_core(std::span<const double> x,
                          std::span<const double> lower,
                          std::span<const double> upper, std::span<double> y,
                          std::span<double> low_push, std::span<double> up_push) {
    const std::size_t n = x.size() - 1;
    double yk;
    double lp = 0.0, up = 0.0;
    if (x[0] < lower[0]) {
        yk = lower[0];
        lp = lower[0] - x[0];
    } else if (x[0] > upper[0]) {
        yk = upper[0];
        up = x[0] - upper[0];
    } else {
        yk = x[0];
    }
    y[0] = yk;
    low_push[0] = lp;
    up_push[0] = up;

    for (std::size_t k = 1; k <= n; ++k) {
        const double pre = yk + (x[k] - x[k - 1]);
        if (pre < lower[k]) {
            lp += lower[k] - pre;
            yk = lower[k];
        } else if (pre > upper[k]) {
            up += pre - upper[k];
            yk = upper[k];
        } else {
            yk = pre;
        }
        y[k] = yk;
        low_push[k] = lp;
        up_push[k] = up;
    }
}

Reflection step_projection(const DiscretePath& x, const BarrierPair& b) {
    require_same_grid(x, b, "step_projection");
    const int n = x.grid().steps;
    std::vector<double> y(n + 1), low_push(n + 1), up_push(n + 1);
    step_projection_core(x.values(), b.lower.values(), b.upper.values(), y,
                         low_push, up_push);

    std::vector<double> xi(n + 1), eta(n + 1);
    for (int k = 0; k <= n; ++k) {
        eta[k] = y[k] - x[k];
        xi[k] = -eta[k];
    }
    const TimeGrid& g = x.grid();
    return Reflection{DiscretePath(g, std::move(y)), DiscretePath(g, std::move(xi)),
                      DiscretePath(g, std::move(eta)),
                      DiscretePath(g, std::move(low_push)),
                      DiscretePath(g, std::move(up_push))};
}

Reflection reflect(const DiscretePath& x, const BarrierPair& b) {
    Reflection r = step_projection(x, b);
    DiscretePath xi = regulator_max_formula(x, b);
    const int n = x.grid().steps;
    std::vector<double> y(n + 1), eta(n + 1);
    for (int k = 0; k <= n; ++k) {
        y[k] = x[k] - xi[k];
        eta[k] = -xi[k];
    }
    r.reflected = DiscretePath(x.grid(), std::move(y));
    r.regulator = DiscretePath(x.grid(), std::move(eta));
    r.xi = std::move(xi);
    return r;
}

std::pair<double, double> flat_off_residuals(const Reflection& r,
                                             const BarrierPair& b) {
    if (r.reflected.grid() != b.lower.grid()) {
        throw std::invalid_argument("flat_off_residuals: grid mismatch");
    }
    const int n = b.lower.grid().steps;
    double upper = 0.0, lower = 0.0;
    double prev_up = 0.0, prev_low = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double du = r.upper_push[k] - prev_up;
        const double dl = r.lower_push[k] - prev_low;
        prev_up = r.upper_push[k];
        prev_low = r.lower_push[k];
        upper += (b.upper[k] - r.reflected[k]) * du;
        lower += (r.reflected[k] - b.lower[k]) * dl;
    }
    return {upper, lower};
}

double lipschitz_gap(const DiscretePath& x, const DiscretePath& x2,
                     const BarrierPair& b) {
    const Reflection rx = step_projection(x, b);
    const Reflection rx2 = step_projection(x2, b);
    return sup_norm_distance(x, x2) -
           sup_norm_distance(rx.reflected, rx2.reflected);
}

}  // namespace rbsde
