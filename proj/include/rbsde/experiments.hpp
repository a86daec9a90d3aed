#pragma once

#include <cstdint>
#include <vector>

#include "rbsde/solver.hpp"

namespace rbsde {

/// Response of the solution triple to terminal perturbations of size eps.
struct DependenceReport {
    std::vector<double> eps;
    std::vector<double> terminal_gap_sq;  // E |xi_1 - xi_2|^2
    std::vector<double> lhs;  // E sup|dY|^2 + E sup|dK|^2 + E int|dZ|^2
    std::vector<double> ratio;
    double fitted_constant = 0.0;  // max ratio over the positive-gap rows
};

/**
 * Solves the scenario with terminal xi and with xi + eps * delta for every
 * eps, comparing the solutions in the sup/integral expectations. Every
 * perturbed terminal must stay inside the boundaries at the horizon.
 */
DependenceReport dependence_study(const Scenario& sc, const TerminalSpec& delta,
                                  std::span<const double> eps_list,
                                  const PicardConfig& cfg);

struct ConvergenceRow {
    int steps = 0;
    double sup_error = 0.0;  // sup-node |Y_fixed_point - Y_backward_scheme|
};

/**
 * Mesh-refinement comparison of the fixed-point solution against the
 * backward clamp scheme; requires a driver the scheme supports.
 */
std::vector<ConvergenceRow> convergence_study(
    double horizon, const BarrierSpec& lower, const BarrierSpec& upper,
    const DriverSpec& driver, const TerminalSpec& terminal,
    std::span<const int> steps_list, const PicardConfig& cfg);

struct LocalTimeRow {
    int steps = 0;
    double mean_relative_rmse = 0.0;
};

/**
 * Reflected-walk study: simulates `num_paths` Gaussian walks per mesh,
 * reflects them between the boundaries, and compares the local-time
 * reconstruction of the reflection process against the negated regulator.
 * The relative error per mesh is the ratio of summed root-mean-square error
 * to summed root-mean-square regulator size (0/0 counts as 0).
 */
std::vector<LocalTimeRow> local_time_study(double horizon,
                                           const BarrierSpec& lower,
                                           const BarrierSpec& upper,
                                           const DriverSpec& driver,
                                           std::span<const int> mesh_list,
                                           int num_paths, std::uint64_t seed);

}  // namespace rbsde
