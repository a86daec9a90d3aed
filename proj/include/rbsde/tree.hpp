#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbsde/grid.hpp"

namespace rbsde {

/**
 * Non-recombining binary tree over the Brownian increments: 2^N equally
 * likely paths, increment k+1 of path omega given by bit (N-k-1), so the
 * paths through a depth-k node form one contiguous block of indices.
 */
class PathTree {
  public:
    static constexpr int kDefaultMaxDepth = 16;

    explicit PathTree(TimeGrid grid, int max_depth = kDefaultMaxDepth);

    const TimeGrid& grid() const { return grid_; }
    int depth() const { return grid_.steps; }
    double step() const { return step_; }  // sqrt(dt)
    std::size_t path_count() const { return std::size_t{1} << depth(); }
    double path_weight() const;  // 2^-N

    /// Prefix node of omega at depth k (0 <= k <= N).
    std::size_t node(std::size_t omega, int k) const {
        return omega >> (depth() - k);
    }

    /// Increment sign bit of step k (1..N): 1 = up.
    bool up(std::size_t omega, int k) const {
        return (omega >> (depth() - k)) & 1u;
    }

    /// Delta W_k for k in 1..N.
    double increment(std::size_t omega, int k) const {
        return up(omega, k) ? step_ : -step_;
    }

    /// W_k along omega (exact: step * signed count of up moves).
    double brownian(std::size_t omega, int k) const;

  private:
    TimeGrid grid_;
    double step_;
};

PathTree build_tree(const TimeGrid& grid, int max_depth = PathTree::kDefaultMaxDepth);

/// One value per (level k, length-k prefix); level k holds 2^k entries.
class AdaptedProcess {
  public:
    AdaptedProcess() = default;
    explicit AdaptedProcess(int depth, double init = 0.0);

    int depth() const { return depth_; }
    std::span<double> level(int k);
    std::span<const double> level(int k) const;
    double& at(int k, std::size_t node) { return data_[offset(k) + node]; }
    double at(int k, std::size_t node) const { return data_[offset(k) + node]; }

  private:
    static std::size_t offset(int k) { return (std::size_t{1} << k) - 1; }
    int depth_ = -1;
    std::vector<double> data_;
};

/// One value per (level k, full path omega); deliberately unconstrained.
class RawProcess {
  public:
    RawProcess() = default;
    explicit RawProcess(int depth, double init = 0.0);

    int depth() const { return depth_; }
    std::size_t paths() const { return std::size_t{1} << depth_; }
    std::span<double> level(int k);
    std::span<const double> level(int k) const;
    double& at(int k, std::size_t omega) { return data_[k * paths() + omega]; }
    double at(int k, std::size_t omega) const { return data_[k * paths() + omega]; }

  private:
    int depth_ = -1;
    std::vector<double> data_;
};

/// Mean of `values` (one entry per path) under the uniform path weights.
double expectation(const PathTree& tree, std::span<const double> values);

/**
 * E[X | F_k] for X given by one value per path (a time-m slice of a raw
 * process): equal-weight average over each depth-k block. Requires k <= m.
 */
std::vector<double> conditional_expectation(const PathTree& tree,
                                            std::span<const double> values,
                                            int m, int k);

/// Level-wise conditional averaging: result level k = E[X_k | F_k].
AdaptedProcess optional_projection(const PathTree& tree, const RawProcess& x);

/**
 * Adapted increasing image of a raw increasing process: increment at level k
 * is the depth-k conditional average of the raw increment, accumulated along
 * the tree. Satisfies the exact summation-by-parts duality with the optional
 * projection. With `require_nondecreasing`, raw increments must be >= 0.
 */
AdaptedProcess dual_optional_projection(const PathTree& tree, const RawProcess& a,
                                        bool require_nondecreasing);

/**
 * Predictable integrand reproducing an adapted martingale from its increments:
 * Z_k = (M_{k+1}(up) - M_{k+1}(down)) / (2 sqrt(dt)). Verifies the one-step
 * martingale property within `tol` first. Result has depth N-1.
 */
AdaptedProcess martingale_representation(const PathTree& tree,
                                         const AdaptedProcess& m,
                                         double tol = 1e-12);

/// I_k(omega) = sum_{j<k} Z_j(prefix) * dW_{j+1}(omega).
RawProcess stochastic_integral(const PathTree& tree, const AdaptedProcess& z);

}  // namespace rbsde
