#include "rbsde/local_time.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rbsde {

namespace {

double negative_part(double v) { return v < 0.0 ? -v : 0.0; }

struct OneSidedSums {
    std::vector<double> lower;  // -sum 1{|Y-L|<=eps} f dt - sum 1{.} dA^L - L^{Y-L}
    std::vector<double> upper;  // +sum 1{|U-Y|<=eps} f dt + sum 1{.} dA^U - L^{U-Y}
};

OneSidedSums one_sided_sums(const DiscretePath& y, const BarrierPair& b,
                            const DiscretePath& fvals, double eps) {
    if (y.grid() != b.lower.grid() || fvals.grid() != y.grid()) {
        throw std::invalid_argument("reflection reconstruction: grid mismatch");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("reflection reconstruction: eps must be >= 0");
    }
    const int n = y.grid().steps;
    const double dt = y.grid().dt();
    for (int k = 0; k <= n; ++k) {
        if (y[k] < b.lower[k] - eps || y[k] > b.upper[k] + eps) {
            throw std::domain_error(
                "reflection reconstruction: path leaves the boundaries beyond eps");
        }
    }

    std::vector<double> dist_low(n + 1), dist_up(n + 1);
    for (int k = 0; k <= n; ++k) {
        dist_low[k] = y[k] - b.lower[k];
        dist_up[k] = b.upper[k] - y[k];
    }

    OneSidedSums out;
    out.lower.assign(n + 1, 0.0);
    out.upper.assign(n + 1, 0.0);
    double acc_low = 0.0, acc_up = 0.0;
    double lt_low = 0.0, lt_up = 0.0;
    for (int k = 1; k <= n; ++k) {
        const int j = k - 1;
        const bool at_low = std::fabs(dist_low[j]) <= eps;
        const bool at_up = std::fabs(dist_up[j]) <= eps;
        // Tanaka estimates for (Y-L) and (U-Y) at level 0; the indicator of
        // the Tanaka sum is one-sided (value <= eps), which coincides with
        // the |.| <= eps contact set on in-barrier paths.
        if (dist_low[j] <= eps) {
            lt_low += dist_low[k] - dist_low[j];
        }
        if (dist_up[j] <= eps) {
            lt_up += dist_up[k] - dist_up[j];
        }
        const double tanaka_low =
            negative_part(dist_low[k]) - negative_part(dist_low[0]) + lt_low;
        const double tanaka_up =
            negative_part(dist_up[k]) - negative_part(dist_up[0]) + lt_up;

        if (at_low) {
            acc_low += fvals[j] * dt + (b.lower[k] - b.lower[j]);
        }
        if (at_up) {
            acc_up += fvals[j] * dt + (b.upper[k] - b.upper[j]);
        }
        out.lower[k] = -acc_low - tanaka_low;
        out.upper[k] = acc_up - tanaka_up;
    }
    return out;
}

}  // namespace

bool LocalTimeEstimate::nondecreasing_within(double tol) const {
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (path[k] < path[k - 1] - tol) return false;
    }
    return true;
}

LocalTimeEstimate tanaka_local_time(const DiscretePath& s, double eps) {
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("tanaka_local_time: eps must be >= 0");
    }
    const int n = s.grid().steps;
    std::vector<double> lt(n + 1, 0.0);
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        if (s[k - 1] <= eps) {
            acc += s[k] - s[k - 1];
        }
        lt[k] = negative_part(s[k]) - negative_part(s[0]) + acc;
    }
    return LocalTimeEstimate{DiscretePath(s.grid(), std::move(lt)), eps,
                             LocalTimeSource::tanaka};
}

DiscretePath reflection_from_local_times(const DiscretePath& y,
                                         const BarrierPair& b,
                                         const DiscretePath& fvals, double eps) {
    OneSidedSums sums = one_sided_sums(y, b, fvals, eps);
    std::vector<double> k(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        k[i] = sums.lower[i] - sums.upper[i];
    }
    return DiscretePath(y.grid(), std::move(k));
}

std::pair<DiscretePath, DiscretePath> one_sided_reflection_terms(
    const DiscretePath& y, const BarrierPair& b, const DiscretePath& fvals,
    double eps) {
    OneSidedSums sums = one_sided_sums(y, b, fvals, eps);
    return {DiscretePath(y.grid(), std::move(sums.lower)),
            DiscretePath(y.grid(), std::move(sums.upper))};
}

}  // namespace rbsde
