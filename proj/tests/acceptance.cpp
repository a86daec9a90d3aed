// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Criterion 2 asserts the printed constant-1 contraction of the
// reflection map, which the map does not satisfy (the sharp constant is 2);
// it is kept as stated and reports the measured violation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbsde/commands.hpp"
#include "rbsde/csv.hpp"
#include "rbsde/experiments.hpp"
#include "rbsde/random.hpp"

using namespace rbsde;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void verdict(int criterion, const char* name, bool ok, const std::string& note = "") {
    std::printf("[criterion %2d] %-28s %s%s%s\n", criterion, name,
                ok ? "PASS" : "FAIL", note.empty() ? "" : " - ", note.c_str());
    std::fflush(stdout);
}

Scenario contraction_scenario() {
    const TimeGrid g = make_uniform_grid(1.0, 10);
    return validate_scenario(build_tree(g),
                             eval_barriers(BarrierSpec::constant(-0.4),
                                           BarrierSpec::constant(0.4), g),
                             DriverSpec::bounded_nonlinear(0.05),
                             TerminalSpec::clamp(-0.4, 0.4));
}

struct BarrierCase {
    const char* name;
    BarrierSpec lower;
    BarrierSpec upper;
};

std::vector<BarrierCase> barrier_catalog() {
    return {
        {"constant", BarrierSpec::constant(-0.5), BarrierSpec::constant(0.7)},
        {"affine", BarrierSpec::affine(-0.6, 0.3), BarrierSpec::affine(0.5, 0.4)},
        {"sinusoid", BarrierSpec::sinusoid(-0.7, 0.2, 4.0),
         BarrierSpec::sinusoid(0.6, 0.25, 3.0)},
    };
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RBSDE_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

}  // namespace

TEST_CASE("criterion 1: reflection formulas agree") {
    const auto start = Clock::now();
    const TimeGrid g = make_uniform_grid(1.0, 64);
    double worst = 0.0;
    for (const BarrierCase& bc : barrier_catalog()) {
        const BarrierPair b = eval_barriers(bc.lower, bc.upper, g);
        for (int i = 0; i < 1000; ++i) {
            Rng rng = Rng::for_index(2024, static_cast<std::uint64_t>(i));
            const DiscretePath x = random_zigzag(b, 0.3, rng);
            const DiscretePath xi_max = regulator_max_formula(x, b);
            const DiscretePath xi_branch = regulator_branch_formula(x, b);
            const Reflection oracle = step_projection(x, b);
            worst = std::max(worst, sup_norm_distance(xi_max, xi_branch));
            worst = std::max(worst, sup_norm_distance(xi_max, oracle.xi));
        }
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst <= 1e-12 && elapsed < 10.0;
    verdict(1, "triple agreement", ok,
            "max gap " + format_double(worst) + ", " + format_double(elapsed) +
                " s");
    CHECK(worst <= 1e-12);
    CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 2: constant-1 reflection bound (as printed)") {
    const auto start = Clock::now();
    const TimeGrid g = make_uniform_grid(1.0, 64);
    const BarrierPair b = eval_barriers(BarrierSpec::constant(-0.5),
                                        BarrierSpec::constant(0.7), g);
    int violations = 0;
    double worst_gap = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Rng rng = Rng::for_index(4048, static_cast<std::uint64_t>(i));
        const DiscretePath x = random_zigzag(b, 0.3, rng);
        const DiscretePath x2 = random_zigzag(b, 0.3, rng);
        const double gap = lipschitz_gap(x, x2, b);
        if (gap < -1e-12) {
            ++violations;
            worst_gap = std::min(worst_gap, gap);
            const double dx = sup_norm_distance(x, x2);
            worst_ratio = std::max(worst_ratio, (dx - gap) / dx);
        }
    }
    const double elapsed = seconds_since(start);
    const bool ok = violations == 0 && elapsed < 10.0;
    verdict(2, "lipschitz contract", ok,
            std::to_string(violations) +
                "/1000 pairs exceed the constant-1 bound (worst ratio " +
                format_double(worst_ratio) +
                "; the two-sided map is 2-Lipschitz, its regulator functional "
                "1-Lipschitz)");
    CHECK(violations == 0);
    CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 3: flat-off exactness") {
    const TimeGrid g = make_uniform_grid(1.0, 64);
    bool ok = true;
    for (const BarrierCase& bc : barrier_catalog()) {
        const BarrierPair b = eval_barriers(bc.lower, bc.upper, g);
        for (int i = 0; i < 1000; ++i) {
            Rng rng = Rng::for_index(88, static_cast<std::uint64_t>(i));
            const DiscretePath x = random_zigzag(b, 0.35, rng);
            const auto [up, low] = flat_off_residuals(step_projection(x, b), b);
            ok = ok && up == 0.0 && low == 0.0;
        }
    }
    verdict(3, "flat-off exactness", ok);
    CHECK(ok);
}

TEST_CASE("criterion 4: projection duality") {
    const PathTree tree = build_tree(make_uniform_grid(1.0, 10));
    const std::size_t paths = tree.path_count();
    const double weight = tree.path_weight();
    const int n = tree.depth();

    double worst_duality = 0.0, worst_martingale = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = Rng::for_index(314, static_cast<std::uint64_t>(rep));
        RawProcess x(n), a(n);
        for (int k = 0; k <= n; ++k) {
            for (double& v : x.level(k)) v = rng.uniform(-1.0, 1.0);
        }
        for (std::size_t w = 0; w < paths; ++w) {
            a.at(0, w) = rng.uniform(0.0, 0.5);
            for (int k = 1; k <= n; ++k) {
                a.at(k, w) = a.at(k - 1, w) + rng.uniform(0.0, 0.25);
            }
        }
        const AdaptedProcess xb = optional_projection(tree, x);
        const AdaptedProcess ao = dual_optional_projection(tree, a, true);
        const AdaptedProcess ab = optional_projection(tree, a);

        double lhs = 0.0, rhs = 0.0;
        for (std::size_t w = 0; w < paths; ++w) {
            double acc_l = 0.0, acc_r = 0.0;
            for (int k = 0; k <= n; ++k) {
                const std::size_t p = tree.node(w, k);
                const double dao =
                    ao.at(k, p) -
                    (k == 0 ? 0.0 : ao.at(k - 1, tree.node(w, k - 1)));
                const double dak = a.at(k, w) - (k == 0 ? 0.0 : a.at(k - 1, w));
                acc_l += x.at(k, w) * dao;
                acc_r += xb.at(k, p) * dak;
            }
            lhs += weight * acc_l;
            rhs += weight * acc_r;
        }
        worst_duality = std::max(worst_duality, std::fabs(lhs - rhs));

        for (int k = 0; k < n; ++k) {
            for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
                const double here = ab.at(k, p) - ao.at(k, p);
                const double next =
                    0.5 * ((ab.at(k + 1, 2 * p) - ao.at(k + 1, 2 * p)) +
                           (ab.at(k + 1, 2 * p + 1) - ao.at(k + 1, 2 * p + 1)));
                worst_martingale =
                    std::max(worst_martingale, std::fabs(next - here));
            }
        }
    }
    const bool ok = worst_duality <= 1e-10 && worst_martingale <= 1e-10;
    verdict(4, "projection duality", ok,
            "duality gap " + format_double(worst_duality) + ", martingale gap " +
                format_double(worst_martingale));
    CHECK(worst_duality <= 1e-10);
    CHECK(worst_martingale <= 1e-10);
}

TEST_CASE("criterion 5: fixed-point contraction") {
    const auto start = Clock::now();
    Scenario sc = contraction_scenario();
    const PicardConfig cfg = PicardConfig::for_driver(sc.driver);
    auto [quad, report] = solve_picard(sc, cfg);
    const double elapsed = seconds_since(start);

    const double dt = sc.tree.grid().dt();
    bool ratios_ok = true;
    for (double r : report.ratios) ratios_ok = ratios_ok && r <= 1.0;
    const bool ok = report.converged && report.iterations <= 30 && ratios_ok &&
                    report.residuals.identity <=
                        10.0 * dt * (1.0 + sc.driver.lip_yz + sc.driver.lip_k) &&
                    report.residuals.containment == 0.0 &&
                    report.residuals.flat_off <= 1e-9 && elapsed < 60.0;
    verdict(5, "picard contraction", ok,
            std::to_string(report.iterations) + " sweeps, residuals (" +
                format_double(report.residuals.identity) + ", " +
                format_double(report.residuals.containment) + ", " +
                format_double(report.residuals.flat_off) + ")");
    CHECK(report.converged);
    CHECK(report.iterations <= 30);
    CHECK(ratios_ok);
    CHECK(report.residuals.identity <=
          10.0 * dt * (1.0 + sc.driver.lip_yz + sc.driver.lip_k));
    CHECK(report.residuals.containment == 0.0);
    CHECK(report.residuals.flat_off <= 1e-9);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 6: uniqueness across starts") {
    Scenario sc = contraction_scenario();
    PicardConfig cfg = PicardConfig::for_driver(sc.driver);
    cfg.tol = 1e-22;
    cfg.max_iter = 60;
    auto [cold, cold_report] = solve_picard(sc, cfg);
    const SolutionQuad start = oracle_warm_start(sc);
    auto [warm, warm_report] = solve_picard(sc, cfg, &start);

    double gap = 0.0;
    for (int k = 0; k <= sc.tree.depth(); ++k) {
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            gap = std::max(gap, std::fabs(cold.y.at(k, p) - warm.y.at(k, p)));
            gap = std::max(
                gap, std::fabs((cold.k_lower.at(k, p) - cold.k_upper.at(k, p)) -
                               (warm.k_lower.at(k, p) - warm.k_upper.at(k, p))));
            if (k < sc.tree.depth()) {
                gap = std::max(gap,
                               std::fabs(cold.z.at(k, p) - warm.z.at(k, p)));
            }
        }
    }
    const bool ok = cold_report.converged && warm_report.converged && gap <= 1e-7;
    verdict(6, "uniqueness sense", ok, "node-wise gap " + format_double(gap));
    CHECK(cold_report.converged);
    CHECK(warm_report.converged);
    CHECK(gap <= 1e-7);
}

TEST_CASE("criterion 7: oracle equivalence across meshes") {
    const std::vector<int> meshes{6, 8, 10, 12};
    const std::vector<ConvergenceRow> rows = convergence_study(
        1.0, BarrierSpec::constant(-0.3), BarrierSpec::constant(0.3),
        DriverSpec::zero(), TerminalSpec::clamp(-0.3, 0.3), meshes,
        PicardConfig{});
    bool ok = rows.size() == 4;
    std::string detail = "errors";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += " " + format_double(rows[i].sup_error);
        if (i > 0) ok = ok && rows[i].sup_error <= 1.5 * rows[i - 1].sup_error;
    }
    ok = ok && rows.back().sup_error <= rows.front().sup_error;
    verdict(7, "oracle equivalence", ok, detail);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].sup_error <= 1.5 * rows[i - 1].sup_error);
    }
    CHECK(rows.back().sup_error <= rows.front().sup_error);
}

TEST_CASE("criterion 8: continuous dependence") {
    // The contraction scenario with interior headroom in the terminal so that
    // every listed perturbation stays inside the boundaries at the horizon.
    const TimeGrid g = make_uniform_grid(1.0, 10);
    Scenario sc = validate_scenario(build_tree(g),
                                    eval_barriers(BarrierSpec::constant(-0.4),
                                                  BarrierSpec::constant(0.4), g),
                                    DriverSpec::bounded_nonlinear(0.05),
                                    TerminalSpec::clamp(-0.2, 0.2));
    const PicardConfig cfg = PicardConfig::for_driver(sc.driver);

    const std::vector<double> eps0{0.0};
    const DependenceReport zero =
        dependence_study(sc, TerminalSpec::constant(1.0), eps0, cfg);
    const bool zero_ok = zero.lhs[0] == 0.0;

    const std::vector<double> eps{0.2, 0.1, 0.05};
    const DependenceReport r =
        dependence_study(sc, TerminalSpec::constant(1.0), eps, cfg);
    bool finite_ok = true;
    for (double ratio : r.ratio) {
        finite_ok = finite_ok && std::isfinite(ratio) && ratio > 0.0;
    }
    const double lo = std::min({r.ratio[0], r.ratio[1], r.ratio[2]});
    const double hi = std::max({r.ratio[0], r.ratio[1], r.ratio[2]});
    const bool ok = zero_ok && finite_ok && hi / lo < 5.0;
    verdict(8, "continuous dependence", ok,
            "ratios " + format_double(r.ratio[0]) + ", " +
                format_double(r.ratio[1]) + ", " + format_double(r.ratio[2]));
    CHECK(zero_ok);
    CHECK(finite_ok);
    CHECK(hi / lo < 5.0);
}

TEST_CASE("criterion 9: local-time reconstruction") {
    const std::vector<int> meshes{256, 1024, 4096};
    const std::vector<LocalTimeRow> rows =
        local_time_study(1.0, BarrierSpec::constant(0.0),
                         BarrierSpec::constant(1.0), DriverSpec::zero(), meshes,
                         100, 7);
    bool ok = rows.size() == 3;
    std::string detail = "rmse";
    for (const LocalTimeRow& row : rows) {
        detail += " " + format_double(row.mean_relative_rmse);
    }
    ok = ok && rows[1].mean_relative_rmse <= rows[0].mean_relative_rmse;
    ok = ok && rows[2].mean_relative_rmse <= rows[1].mean_relative_rmse;
    ok = ok && rows[2].mean_relative_rmse <= 0.25;
    verdict(9, "local-time reconstruction", ok, detail);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].mean_relative_rmse <= rows[0].mean_relative_rmse);
    CHECK(rows[2].mean_relative_rmse <= rows[1].mean_relative_rmse);
    CHECK(rows[2].mean_relative_rmse <= 0.25);
}

TEST_CASE("criterion 10: byte-identical reruns") {
    const fs::path base = fs::current_path() / "acceptance_tmp";
    fs::remove_all(base);
    fs::create_directories(base);

    nlohmann::json cfg;
    cfg["grid"] = {{"T", 1.0}, {"N", 8}};
    cfg["barriers"] = {{"lower", {{"kind", "constant"}, {"params", {-0.4}}}},
                       {"upper", {{"kind", "constant"}, {"params", {0.4}}}}};
    cfg["driver"] = {{"kind", "bounded_nonlinear"}, {"params", {0.05}}};
    cfg["terminal"] = {{"kind", "clamp"}, {"params", {-0.2, 0.2}}};
    cfg["seed"] = 42;
    cfg["paths"] = 200;
    {
        std::ofstream out(base / "cfg.json");
        out << cfg.dump(2);
    }
    nlohmann::json walk_cfg = cfg;
    walk_cfg["barriers"]["lower"] = {{"kind", "constant"}, {"params", {0.0}}};
    walk_cfg["barriers"]["upper"] = {{"kind", "constant"}, {"params", {1.0}}};
    walk_cfg["driver"] = {{"kind", "zero"}};
    walk_cfg["terminal"] = {{"kind", "constant"}, {"params", {0.5}}};
    walk_cfg["paths"] = 20;
    {
        std::ofstream out(base / "walk.json");
        out << walk_cfg.dump(2);
    }

    const std::string cfg_path = (base / "cfg.json").string();
    const std::string walk_path = (base / "walk.json").string();
    const std::map<std::string, std::string> commands{
        {"esm-check", "esm-check --config " + cfg_path + " --seed 42"},
        {"solve", "solve --config " + cfg_path},
        {"depend", "depend --config " + cfg_path + " --eps 0.1,0.05"},
        {"local-time",
         "local-time --config " + walk_path + " --mesh 256,512 --seed 7"},
        {"converge", "converge --config " + walk_path + " --mesh 4,6"},
    };

    bool all_ok = true;
    for (const auto& [name, args] : commands) {
        const fs::path dir_a = base / (name + "_a");
        const fs::path dir_b = base / (name + "_b");
        fs::create_directories(dir_a);
        fs::create_directories(dir_b);
        const int rc_a = run_cli(args + " --out " + dir_a.string());
        const int rc_b = run_cli(args + " --out " + dir_b.string());
        bool same = rc_a == rc_b;
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(dir_a)) {
            ++files;
            const fs::path twin = dir_b / entry.path().filename();
            same = same && fs::exists(twin) &&
                   read_bytes(entry.path()) == read_bytes(twin);
        }
        same = same && files > 0;
        if (!same) {
            MESSAGE("determinism broken for ", name);
        }
        all_ok = all_ok && same;
    }
    verdict(10, "determinism", all_ok);
    CHECK(all_ok);
}
