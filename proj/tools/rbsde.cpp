#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbsde/commands.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::vector<double> eps;
    std::vector<int> mesh;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario JSON file")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed (overrides config)");
    cmd->add_option("--paths", args.paths, "path count (overrides config)");
}

int ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory '" << dir
                  << "': " << ec.message() << '\n';
        return rbsde::kUsageError;
    }
    return rbsde::kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"doubly reflected BSDE toolkit"};
    app.require_subcommand(1);

    CommonArgs esm, solve, depend, local, converge;
    CLI::App* cmd_esm = app.add_subcommand(
        "esm-check", "cross-validate the reflection map on random paths");
    add_common(cmd_esm, esm);
    CLI::App* cmd_solve =
        app.add_subcommand("solve", "fixed-point solve of the reflected system");
    add_common(cmd_solve, solve);
    CLI::App* cmd_depend = app.add_subcommand(
        "depend", "terminal-perturbation sensitivity study");
    add_common(cmd_depend, depend);
    cmd_depend->add_option("--eps", depend.eps, "perturbation sizes")
        ->delimiter(',');
    CLI::App* cmd_local = app.add_subcommand(
        "local-time", "local-time reconstruction error per mesh");
    add_common(cmd_local, local);
    cmd_local->add_option("--mesh", local.mesh, "mesh sizes")->delimiter(',');
    CLI::App* cmd_converge = app.add_subcommand(
        "converge", "fixed point vs backward scheme per mesh");
    add_common(cmd_converge, converge);
    cmd_converge->add_option("--mesh", converge.mesh, "mesh sizes")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? rbsde::kOk : rbsde::kUsageError;
    }

    try {
        const CommonArgs& args = cmd_esm->parsed()      ? esm
                                 : cmd_solve->parsed()  ? solve
                                 : cmd_depend->parsed() ? depend
                                 : cmd_local->parsed()  ? local
                                                        : converge;
        rbsde::ScenarioConfig cfg = rbsde::load_config(args.config_path);
        if (args.seed) cfg.seed = *args.seed;
        if (args.paths) cfg.num_paths = *args.paths;
        if (int rc = ensure_out_dir(args.out_dir); rc != rbsde::kOk) return rc;

        if (cmd_esm->parsed()) {
            return rbsde::cmd_esm_check(cfg, cfg.num_paths, cfg.seed,
                                        args.out_dir);
        }
        if (cmd_solve->parsed()) {
            return rbsde::cmd_solve(cfg, args.out_dir);
        }
        if (cmd_depend->parsed()) {
            const std::vector<double>& eps =
                args.eps.empty() ? cfg.eps_list : args.eps;
            if (eps.empty()) {
                std::cerr << "depend: no eps values (flag --eps or config "
                             "eps_list required)\n";
                return rbsde::kUsageError;
            }
            return rbsde::cmd_depend(cfg, eps, args.out_dir);
        }
        if (cmd_local->parsed()) {
            const std::vector<int>& mesh =
                args.mesh.empty() ? cfg.mesh_list : args.mesh;
            if (mesh.empty()) {
                std::cerr << "local-time: no mesh values (flag --mesh or "
                             "config mesh_list required)\n";
                return rbsde::kUsageError;
            }
            return rbsde::cmd_local_time(cfg, mesh, cfg.num_paths, cfg.seed,
                                         args.out_dir);
        }
        const std::vector<int>& mesh =
            converge.mesh.empty() ? cfg.mesh_list : converge.mesh;
        if (mesh.empty()) {
            std::cerr << "converge: no mesh values (flag --mesh or config "
                         "mesh_list required)\n";
            return rbsde::kUsageError;
        }
        return rbsde::cmd_converge(cfg, mesh, args.out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return rbsde::kUsageError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return rbsde::kValidationError;
    }
}
