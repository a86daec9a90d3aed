#include "rbsde/commands.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "rbsde/csv.hpp"
#include "rbsde/experiments.hpp"
#include "rbsde/random.hpp"

namespace rbsde {

namespace {

constexpr double kCrossCheckTol = 1e-12;
constexpr int kWalkMeshCap = 1 << 14;

std::string joined(const std::filesystem::path& dir, const char* name) {
    return (dir / name).string();
}

nlohmann::ordered_json contraction_json(const ContractionReport& c) {
    nlohmann::ordered_json j;
    j["coef_yz"] = c.coef_yz;
    j["coef_k"] = c.coef_k;
    j["l1_bound_printed"] = c.l1_bound_printed;
    j["l2_bound_printed"] = c.l2_bound_printed;
    j["smallness_l1_printed"] = c.smallness_l1_printed;
    j["smallness_l2_printed"] = c.smallness_l2_printed;
    j["l1_bound_recomputed"] = c.l1_bound_recomputed;
    j["l2_bound_recomputed"] = c.l2_bound_recomputed;
    j["smallness_l1_recomputed"] = c.smallness_l1_recomputed;
    j["smallness_l2_recomputed"] = c.smallness_l2_recomputed;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["gamma1"] = c.gamma1;
    j["gamma2"] = c.gamma2;
    j["c_b"] = c.bdg_constant;
    return j;
}

}  // namespace

int cmd_esm_check(const ScenarioConfig& cfg, int num_paths, std::uint64_t seed,
                  const std::string& out_dir) {
    // Runs on plain grid paths; no tree is involved, so any mesh works.
    std::optional<BarrierPair> parsed;
    try {
        const TimeGrid grid = make_uniform_grid(cfg.horizon, cfg.steps);
        parsed.emplace(eval_barriers(cfg.lower, cfg.upper, grid));
    } catch (const std::exception& e) {
        std::cerr << "esm-check: " << e.what() << '\n';
        return kValidationError;
    }
    const BarrierPair& barriers = *parsed;

    CsvBuilder csv({"path_id", "max_formula_vs_slaby_gap",
                    "max_formula_vs_oracle_gap", "lipschitz_gap",
                    "flat_off_residual_l", "flat_off_residual_u"});
    bool ok = true;
    for (int i = 0; i < num_paths; ++i) {
        Rng rng = Rng::for_index(seed, static_cast<std::uint64_t>(i));
        const DiscretePath x = random_zigzag(barriers, cfg.zigzag_amplitude, rng);
        const DiscretePath x2 = random_zigzag(barriers, cfg.zigzag_amplitude, rng);

        const DiscretePath xi_max = regulator_max_formula(x, barriers);
        const DiscretePath xi_branch = regulator_branch_formula(x, barriers);
        const Reflection oracle = step_projection(x, barriers);

        const double max_vs_branch = sup_norm_distance(xi_max, xi_branch);
        const double max_vs_oracle = sup_norm_distance(xi_max, oracle.xi);
        const double lip = lipschitz_gap(x, x2, barriers);
        const auto [res_up, res_low] = flat_off_residuals(oracle, barriers);

        csv.cell(static_cast<std::int64_t>(i))
            .cell(max_vs_branch)
            .cell(max_vs_oracle)
            .cell(lip)
            .cell(res_low)
            .cell(res_up);
        csv.end_row();

        if (max_vs_branch > kCrossCheckTol || max_vs_oracle > kCrossCheckTol ||
            lip < -kCrossCheckTol || res_low != 0.0 || res_up != 0.0) {
            ok = false;
        }
    }
    write_file_atomic(joined(out_dir, "esm_check.csv"), csv.text());
    return ok ? kOk : kCheckFailure;
}

int cmd_solve(const ScenarioConfig& cfg, const std::string& out_dir) {
    std::optional<Scenario> sc;
    try {
        sc.emplace(build_scenario(cfg));
    } catch (const std::exception& e) {
        std::cerr << "solve: " << e.what() << '\n';
        return kValidationError;
    }
    const PicardConfig picard = cfg.picard_config();

    SolutionQuad start = zero_quad(sc->tree);
    if (cfg.warm_start_from_scheme) {
        start = oracle_warm_start(*sc);
    }
    auto [quad, report] = solve_picard(*sc, picard, &start);

    CsvBuilder iterations({"iter", "distance", "ratio"});
    for (std::size_t i = 0; i < report.distances.size(); ++i) {
        iterations.cell(static_cast<std::int64_t>(i))
            .cell(report.distances[i])
            .cell(i > 0 ? report.ratios[i - 1] : 0.0);
        iterations.end_row();
    }
    write_file_atomic(joined(out_dir, "picard_report.csv"), iterations.text());

    double measured_max_ratio = 0.0;
    for (std::size_t i = 1; i < report.ratios.size(); ++i) {
        measured_max_ratio = std::max(measured_max_ratio, report.ratios[i]);
    }
    nlohmann::ordered_json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["residuals"] = {{"identity", report.residuals.identity},
                      {"containment", report.residuals.containment},
                      {"flat_off", report.residuals.flat_off},
                      {"flat_off_lower", report.residuals.flat_off_lower},
                      {"flat_off_upper", report.residuals.flat_off_upper}};
    j["adaptedness_gap"] = report.adaptedness_gap;
    j["geometric_fit_r2"] = report.geometric_fit_r2;
    j["contraction"] = contraction_json(report.constants);
    j["contraction"]["measured_max_ratio"] = measured_max_ratio;
    write_file_atomic(joined(out_dir, "residuals.json"), j.dump(2) + "\n");

    CsvBuilder solution({"k", "prefix_id", "Y", "Z", "Kl", "Ku"});
    const int n = sc->tree.depth();
    for (int k = 0; k <= n; ++k) {
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            solution.cell(static_cast<std::int64_t>(k))
                .cell(static_cast<std::int64_t>(p))
                .cell(quad.y.at(k, p))
                .cell(k < n ? quad.z.at(k, p) : 0.0)
                .cell(quad.k_lower.at(k, p))
                .cell(quad.k_upper.at(k, p));
            solution.end_row();
        }
    }
    write_file_atomic(joined(out_dir, "solution.csv"), solution.text());

    return report.converged ? kOk : kNoConvergence;
}

int cmd_depend(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
               const std::string& out_dir) {
    std::optional<Scenario> sc;
    try {
        sc.emplace(build_scenario(cfg));
    } catch (const std::exception& e) {
        std::cerr << "depend: " << e.what() << '\n';
        return kValidationError;
    }
    DependenceReport report;
    try {
        report = dependence_study(*sc, cfg.perturbation, eps_list,
                                  cfg.picard_config());
    } catch (const std::domain_error& e) {
        std::cerr << "depend: " << e.what() << '\n';
        return kValidationError;
    }
    CsvBuilder csv({"eps", "E_xi_hat_sq", "lhs", "ratio"});
    for (std::size_t i = 0; i < report.eps.size(); ++i) {
        csv.cell(report.eps[i])
            .cell(report.terminal_gap_sq[i])
            .cell(report.lhs[i])
            .cell(report.ratio[i]);
        csv.end_row();
    }
    write_file_atomic(joined(out_dir, "dependence.csv"), csv.text());
    return kOk;
}

int cmd_local_time(const ScenarioConfig& cfg, const std::vector<int>& mesh_list,
                   int num_paths, std::uint64_t seed,
                   const std::string& out_dir) {
    for (int n : mesh_list) {
        if (n < 1 || n > kWalkMeshCap) {
            std::cerr << "local-time: mesh " << n << " outside [1, "
                      << kWalkMeshCap << "]\n";
            return kValidationError;
        }
    }
    std::vector<LocalTimeRow> rows;
    try {
        rows = local_time_study(cfg.horizon, cfg.lower, cfg.upper, cfg.driver,
                                mesh_list, num_paths, seed);
    } catch (const std::exception& e) {
        std::cerr << "local-time: " << e.what() << '\n';
        return kValidationError;
    }
    CsvBuilder csv({"N", "mean_relative_rmse"});
    for (const LocalTimeRow& row : rows) {
        csv.cell(static_cast<std::int64_t>(row.steps)).cell(row.mean_relative_rmse);
        csv.end_row();
    }
    write_file_atomic(joined(out_dir, "local_time_rmse.csv"), csv.text());
    return kOk;
}

int cmd_converge(const ScenarioConfig& cfg, const std::vector<int>& mesh_list,
                 const std::string& out_dir) {
    std::vector<ConvergenceRow> rows;
    try {
        rows = convergence_study(cfg.horizon, cfg.lower, cfg.upper, cfg.driver,
                                 cfg.terminal, mesh_list, cfg.picard_config());
    } catch (const std::length_error& e) {
        std::cerr << "converge: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::domain_error& e) {
        std::cerr << "converge: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::runtime_error& e) {
        std::cerr << "converge: " << e.what() << '\n';
        return kNoConvergence;
    }
    CsvBuilder csv({"N", "sup_error"});
    for (const ConvergenceRow& row : rows) {
        csv.cell(static_cast<std::int64_t>(row.steps)).cell(row.sup_error);
        csv.end_row();
    }
    write_file_atomic(joined(out_dir, "convergence.csv"), csv.text());
    return kOk;
}

}  // namespace rbsde
