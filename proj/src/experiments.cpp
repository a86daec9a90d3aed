#include "rbsde/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rbsde/kernels.hpp"
#include "rbsde/local_time.hpp"
#include "rbsde/random.hpp"

namespace rbsde {

namespace {

/// E sup_k |dY|^2 + E sup_k |dK|^2 + sum_k E|dZ_k|^2 dt between two quads.
double perturbation_functional(const PathTree& tree, const SolutionQuad& a,
                               const SolutionQuad& b, double* terminal_gap_sq,
                               std::span<const double> xi_a,
                               std::span<const double> xi_b) {
    const int n = tree.depth();
    const std::size_t paths = tree.path_count();
    const double dt = tree.grid().dt();
    const double weight = tree.path_weight();

    double e_sup_y = 0.0, e_sup_k = 0.0;
    for (std::size_t w = 0; w < paths; ++w) {
        double peak_y = 0.0, peak_k = 0.0;
        for (int k = 0; k <= n; ++k) {
            const std::size_t p = tree.node(w, k);
            const double dy = a.y.at(k, p) - b.y.at(k, p);
            const double dk = (a.k_lower.at(k, p) - a.k_upper.at(k, p)) -
                              (b.k_lower.at(k, p) - b.k_upper.at(k, p));
            peak_y = std::max(peak_y, dy * dy);
            peak_k = std::max(peak_k, dk * dk);
        }
        e_sup_y += weight * peak_y;
        e_sup_k += weight * peak_k;
    }

    double e_int_z = 0.0;
    std::vector<double> diff;
    for (int k = 0; k < n; ++k) {
        const std::size_t m = std::size_t{1} << k;
        diff.resize(m);
        for (std::size_t p = 0; p < m; ++p) {
            diff[p] = a.z.at(k, p) - b.z.at(k, p);
        }
        e_int_z += std::ldexp(kernels::sum_squares(diff), -k) * dt;
    }

    if (terminal_gap_sq) {
        double gap = 0.0;
        for (std::size_t w = 0; w < paths; ++w) {
            const double d = xi_a[w] - xi_b[w];
            gap += weight * d * d;
        }
        *terminal_gap_sq = gap;
    }
    return e_sup_y + e_sup_k + e_int_z;
}

}  // namespace

DependenceReport dependence_study(const Scenario& sc, const TerminalSpec& delta,
                                  std::span<const double> eps_list,
                                  const PicardConfig& cfg) {
    const std::size_t paths = sc.tree.path_count();
    std::vector<double> delta_values(paths);
    for (std::size_t w = 0; w < paths; ++w) {
        delta_values[w] = delta.eval(sc.tree, w);
    }

    // Every perturbed terminal must validate before any solve runs.
    std::vector<Scenario> perturbed;
    perturbed.reserve(eps_list.size());
    for (double eps : eps_list) {
        std::vector<double> values(paths);
        for (std::size_t w = 0; w < paths; ++w) {
            values[w] = sc.terminal_values[w] + eps * delta_values[w];
        }
        try {
            perturbed.push_back(sc.with_terminal_values(std::move(values)));
        } catch (const std::domain_error& e) {
            throw std::domain_error("dependence_study: eps = " +
                                    std::to_string(eps) + ": " + e.what());
        }
    }

    auto [base_quad, base_report] = solve_picard(sc, cfg);
    (void)base_report;

    DependenceReport report;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        auto [quad2, rep2] = solve_picard(perturbed[i], cfg);
        (void)rep2;
        double gap_sq = 0.0;
        const double lhs = perturbation_functional(
            sc.tree, base_quad, quad2, &gap_sq, sc.terminal_values,
            perturbed[i].terminal_values);
        report.eps.push_back(eps_list[i]);
        report.terminal_gap_sq.push_back(gap_sq);
        report.lhs.push_back(lhs);
        const double ratio = gap_sq > 0.0 ? lhs / gap_sq : 0.0;
        report.ratio.push_back(ratio);
        if (gap_sq > 0.0) {
            report.fitted_constant = std::max(report.fitted_constant, ratio);
        }
    }
    return report;
}

std::vector<ConvergenceRow> convergence_study(
    double horizon, const BarrierSpec& lower, const BarrierSpec& upper,
    const DriverSpec& driver, const TerminalSpec& terminal,
    std::span<const int> steps_list, const PicardConfig& cfg) {
    std::vector<ConvergenceRow> rows;
    for (int n : steps_list) {
        const TimeGrid grid = make_uniform_grid(horizon, n);
        PathTree tree = build_tree(grid);
        Scenario sc = validate_scenario(tree, eval_barriers(lower, upper, grid),
                                        driver, terminal);
        const SolutionQuad oracle = backward_induction_oracle(sc);
        auto [quad, report] = solve_picard(sc, cfg);
        if (!report.converged) {
            throw std::runtime_error("convergence_study: no convergence at N = " +
                                     std::to_string(n));
        }
        double err = 0.0;
        for (int k = 0; k <= tree.depth(); ++k) {
            err = std::max(err,
                           kernels::max_abs_diff(quad.y.level(k), oracle.y.level(k)));
        }
        rows.push_back(ConvergenceRow{n, err});
    }
    return rows;
}

std::vector<LocalTimeRow> local_time_study(double horizon,
                                           const BarrierSpec& lower,
                                           const BarrierSpec& upper,
                                           const DriverSpec& driver,
                                           std::span<const int> mesh_list,
                                           int num_paths, std::uint64_t seed) {
    std::vector<LocalTimeRow> rows;
    for (int n : mesh_list) {
        const TimeGrid grid = make_uniform_grid(horizon, n);
        const BarrierPair barriers = eval_barriers(lower, upper, grid);
        const double eps = std::sqrt(grid.dt());
        const double start = 0.5 * (barriers.lower[0] + barriers.upper[0]);

        double err_rms_sum = 0.0;
        double size_rms_sum = 0.0;
        for (int i = 0; i < num_paths; ++i) {
            Rng rng = Rng::for_index(seed, (static_cast<std::uint64_t>(n) << 32) +
                                               static_cast<std::uint64_t>(i));
            const DiscretePath walk = random_walk(grid, start, rng);
            const Reflection refl = step_projection(walk, barriers);

            std::vector<double> fvals(grid.points());
            for (int k = 0; k <= n; ++k) {
                fvals[k] = driver(grid.time(k), refl.reflected[k], 0.0, 0.0);
            }
            const DiscretePath recon = reflection_from_local_times(
                refl.reflected, barriers, DiscretePath(grid, std::move(fvals)),
                eps);

            double err_sq = 0.0, size_sq = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double e = recon[k] - (-refl.regulator[k]);
                err_sq += e * e;
                size_sq += refl.regulator[k] * refl.regulator[k];
            }
            err_rms_sum += std::sqrt(err_sq / grid.points());
            size_rms_sum += std::sqrt(size_sq / grid.points());
        }
        const double rel =
            size_rms_sum > 0.0 ? err_rms_sum / size_rms_sum : 0.0;
        rows.push_back(LocalTimeRow{n, rel});
    }
    return rows;
}

}  // namespace rbsde
