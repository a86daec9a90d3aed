#include "rbsde/tree.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbsde/kernels.hpp"

namespace rbsde {

PathTree::PathTree(TimeGrid grid, int max_depth) : grid_(grid) {
    if (grid_.steps < 1) {
        throw std::invalid_argument("PathTree: grid must have at least one step");
    }
    if (grid_.steps > max_depth) {
        throw std::length_error("PathTree: depth " + std::to_string(grid_.steps) +
                                " exceeds cap " + std::to_string(max_depth));
    }
    step_ = std::sqrt(grid_.dt());
}

double PathTree::path_weight() const { return std::ldexp(1.0, -depth()); }

double PathTree::brownian(std::size_t omega, int k) const {
    const std::size_t prefix = node(omega, k);
    const int ups = std::popcount(prefix);
    return step_ * (2 * ups - k);
}

PathTree build_tree(const TimeGrid& grid, int max_depth) {
    return PathTree(grid, max_depth);
}

AdaptedProcess::AdaptedProcess(int depth, double init)
    : depth_(depth), data_((std::size_t{2} << depth) - 1, init) {
    if (depth < 0) throw std::invalid_argument("AdaptedProcess: negative depth");
}

std::span<double> AdaptedProcess::level(int k) {
    return {data_.data() + offset(k), std::size_t{1} << k};
}

std::span<const double> AdaptedProcess::level(int k) const {
    return {data_.data() + offset(k), std::size_t{1} << k};
}

RawProcess::RawProcess(int depth, double init)
    : depth_(depth),
      data_(static_cast<std::size_t>(depth + 1) << depth, init) {
    if (depth < 0) throw std::invalid_argument("RawProcess: negative depth");
}

std::span<double> RawProcess::level(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * paths(), paths()};
}

std::span<const double> RawProcess::level(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * paths(), paths()};
}

double expectation(const PathTree& tree, std::span<const double> values) {
    if (values.size() != tree.path_count()) {
        throw std::invalid_argument("expectation: one value per path required");
    }
    double total[1];
    kernels::block_sums(values, {total, 1});
    return std::ldexp(total[0], -tree.depth());
}

std::vector<double> conditional_expectation(const PathTree& tree,
                                            std::span<const double> values,
                                            int m, int k) {
    if (k > m || k < 0 || m > tree.depth()) {
        throw std::invalid_argument(
            "conditional_expectation: need 0 <= k <= m <= depth");
    }
    if (values.size() != tree.path_count()) {
        throw std::invalid_argument(
            "conditional_expectation: one value per path required");
    }
    std::vector<double> out(std::size_t{1} << k);
    kernels::block_sums(values, out);
    const int shift = k - tree.depth();
    for (double& v : out) v = std::ldexp(v, shift);
    return out;
}

AdaptedProcess optional_projection(const PathTree& tree, const RawProcess& x) {
    if (x.depth() != tree.depth()) {
        throw std::invalid_argument("optional_projection: depth mismatch");
    }
    const int n = tree.depth();
    AdaptedProcess out(n);
    for (int k = 0; k <= n; ++k) {
        kernels::block_sums(x.level(k), out.level(k));
        const int shift = k - n;
        for (double& v : out.level(k)) v = std::ldexp(v, shift);
    }
    return out;
}

AdaptedProcess dual_optional_projection(const PathTree& tree, const RawProcess& a,
                                        bool require_nondecreasing) {
    if (a.depth() != tree.depth()) {
        throw std::invalid_argument("dual_optional_projection: depth mismatch");
    }
    const int n = tree.depth();
    const std::size_t paths = tree.path_count();
    AdaptedProcess out(n);

    std::vector<double> delta(paths);
    std::vector<double> level_means;
    for (int k = 0; k <= n; ++k) {
        std::span<const double> cur = a.level(k);
        if (k == 0) {
            std::copy(cur.begin(), cur.end(), delta.begin());
        } else {
            std::span<const double> prev = a.level(k - 1);
            for (std::size_t w = 0; w < paths; ++w) {
                delta[w] = cur[w] - prev[w];
            }
        }
        if (require_nondecreasing && k > 0) {
            for (std::size_t w = 0; w < paths; ++w) {
                if (delta[w] < 0.0) {
                    throw std::domain_error(
                        "dual_optional_projection: raw increments must be "
                        "nondecreasing");
                }
            }
        }
        level_means.assign(std::size_t{1} << k, 0.0);
        kernels::block_sums(delta, level_means);
        const int shift = k - n;
        std::span<double> lvl = out.level(k);
        for (std::size_t p = 0; p < lvl.size(); ++p) {
            const double inc = std::ldexp(level_means[p], shift);
            lvl[p] = (k == 0) ? inc : out.at(k - 1, p >> 1) + inc;
        }
    }
    return out;
}

AdaptedProcess martingale_representation(const PathTree& tree,
                                         const AdaptedProcess& m, double tol) {
    if (m.depth() != tree.depth()) {
        throw std::invalid_argument("martingale_representation: depth mismatch");
    }
    const int n = tree.depth();
    const double two_step = 2.0 * tree.step();
    AdaptedProcess z(n - 1);
    for (int k = 0; k < n; ++k) {
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            const double down = m.at(k + 1, 2 * p);
            const double up = m.at(k + 1, 2 * p + 1);
            if (std::fabs(0.5 * (down + up) - m.at(k, p)) > tol) {
                throw std::domain_error(
                    "martingale_representation: input fails the one-step "
                    "martingale property at level " + std::to_string(k));
            }
            z.at(k, p) = (up - down) / two_step;
        }
    }
    return z;
}

RawProcess stochastic_integral(const PathTree& tree, const AdaptedProcess& z) {
    if (z.depth() < tree.depth() - 1) {
        throw std::invalid_argument("stochastic_integral: integrand too shallow");
    }
    const int n = tree.depth();
    RawProcess integral(n, 0.0);
    for (int k = 0; k < n; ++k) {
        for (std::size_t w = 0; w < tree.path_count(); ++w) {
            integral.at(k + 1, w) =
                integral.at(k, w) +
                z.at(k, tree.node(w, k)) * tree.increment(w, k + 1);
        }
    }
    return integral;
}

}  // namespace rbsde
