#include "rbsde/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rbsde {

namespace {

using nlohmann::json;

std::vector<double> params_of(const json& j) {
    std::vector<double> out;
    for (const auto& v : j.at("params")) out.push_back(v.get<double>());
    return out;
}

BarrierSpec parse_barrier(const json& j, const char* side) {
    const std::string kind = j.at("kind").get<std::string>();
    BarrierSpec spec;
    spec.params = params_of(j);
    if (kind == "constant") {
        spec.kind = BarrierSpec::Kind::constant;
    } else if (kind == "affine") {
        spec.kind = BarrierSpec::Kind::affine;
    } else if (kind == "sinusoid") {
        spec.kind = BarrierSpec::Kind::sinusoid;
    } else {
        throw std::invalid_argument("config: unknown " + std::string(side) +
                                    " barrier kind '" + kind + "'");
    }
    return spec;
}

DriverSpec parse_driver(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::vector<double> p =
        j.contains("params") ? params_of(j) : std::vector<double>{};
    if (kind == "zero") {
        if (!p.empty()) throw std::invalid_argument("config: zero driver takes no params");
        return DriverSpec::zero();
    }
    if (kind == "constant") {
        if (p.size() != 1) throw std::invalid_argument("config: constant driver needs 1 param");
        return DriverSpec::constant(p[0]);
    }
    if (kind == "affine") {
        if (p.size() != 4) throw std::invalid_argument("config: affine driver needs 4 params");
        return DriverSpec::affine(p[0], p[1], p[2], p[3]);
    }
    if (kind == "bounded_nonlinear") {
        if (p.size() != 1)
            throw std::invalid_argument("config: bounded_nonlinear driver needs 1 param");
        return DriverSpec::bounded_nonlinear(p[0]);
    }
    throw std::invalid_argument("config: unknown driver kind '" + kind + "'");
}

TerminalSpec parse_terminal(const json& j, const char* field) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::vector<double> p =
        j.contains("params") ? params_of(j) : std::vector<double>{};
    auto need = [&](std::size_t n) {
        if (p.size() != n) {
            throw std::invalid_argument("config: " + std::string(field) + " kind '" +
                                        kind + "' needs " + std::to_string(n) +
                                        " params");
        }
    };
    if (kind == "constant") {
        need(1);
        return TerminalSpec::constant(p[0]);
    }
    if (kind == "identity") {
        need(0);
        return TerminalSpec::identity();
    }
    if (kind == "affine") {
        need(2);
        return TerminalSpec::affine(p[0], p[1]);
    }
    if (kind == "clamp") {
        need(2);
        return TerminalSpec::clamp(p[0], p[1]);
    }
    if (kind == "sinusoid") {
        need(3);
        return TerminalSpec::sinusoid(p[0], p[1], p[2]);
    }
    if (kind == "running_max") {
        need(2);
        return TerminalSpec::running_max(p[0], p[1]);
    }
    throw std::invalid_argument("config: unknown " + std::string(field) +
                                " kind '" + kind + "'");
}

PicardConfig parse_picard(const json& j, const DriverSpec& driver) {
    PicardConfig cfg = PicardConfig::for_driver(driver);
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("gamma1")) cfg.gamma1 = j.at("gamma1").get<double>();
    if (j.contains("gamma2")) cfg.gamma2 = j.at("gamma2").get<double>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
    if (j.contains("c_b")) cfg.bdg_constant = j.at("c_b").get<double>();
    if (!(cfg.beta > 0.0) || !(cfg.gamma1 > 0.0) || !(cfg.gamma2 > 0.0) ||
        cfg.alpha < 0.0 || !(cfg.tol > 0.0) || cfg.max_iter < 1) {
        throw std::invalid_argument("config: invalid picard block");
    }
    return cfg;
}

}  // namespace

PicardConfig ScenarioConfig::picard_config() const {
    return picard ? *picard : PicardConfig::for_driver(driver);
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                    e.what());
    }
    ScenarioConfig cfg;
    try {
        const json& grid = j.at("grid");
        cfg.horizon = grid.at("T").get<double>();
        cfg.steps = grid.at("N").get<int>();
        const json& barriers = j.at("barriers");
        cfg.lower = parse_barrier(barriers.at("lower"), "lower");
        cfg.upper = parse_barrier(barriers.at("upper"), "upper");
        cfg.driver = parse_driver(j.at("driver"));
        cfg.terminal = parse_terminal(j.at("terminal"), "terminal");
        if (j.contains("picard")) {
            cfg.picard = parse_picard(j.at("picard"), cfg.driver);
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("paths")) cfg.num_paths = j.at("paths").get<int>();
        if (j.contains("eps_list")) {
            for (const auto& v : j.at("eps_list")) {
                cfg.eps_list.push_back(v.get<double>());
            }
        }
        if (j.contains("mesh_list")) {
            for (const auto& v : j.at("mesh_list")) {
                cfg.mesh_list.push_back(v.get<int>());
            }
        }
        if (j.contains("zigzag_amplitude")) {
            cfg.zigzag_amplitude = j.at("zigzag_amplitude").get<double>();
        }
        if (j.contains("warm_start")) {
            const std::string w = j.at("warm_start").get<std::string>();
            if (w == "oracle") {
                cfg.warm_start_from_scheme = true;
            } else if (w == "zero") {
                cfg.warm_start_from_scheme = false;
            } else {
                throw std::invalid_argument(
                    "config: warm_start must be 'zero' or 'oracle'");
            }
        }
        if (j.contains("perturbation")) {
            cfg.perturbation = parse_terminal(j.at("perturbation"), "perturbation");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: missing or bad field: ") +
                                    e.what());
    }
    if (cfg.num_paths < 0) {
        throw std::invalid_argument("config: paths must be >= 0");
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    const TimeGrid grid = make_uniform_grid(cfg.horizon, cfg.steps);
    PathTree tree = build_tree(grid);
    return validate_scenario(tree, eval_barriers(cfg.lower, cfg.upper, grid),
                             cfg.driver, cfg.terminal);
}

}  // namespace rbsde
