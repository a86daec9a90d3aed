#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbsde/solver.hpp"

namespace rbsde {

/// Batch-run description; deserialized from a JSON file.
struct ScenarioConfig {
    double horizon = 1.0;
    int steps = 10;
    BarrierSpec lower = BarrierSpec::constant(-1.0);
    BarrierSpec upper = BarrierSpec::constant(1.0);
    DriverSpec driver = DriverSpec::zero();
    TerminalSpec terminal = TerminalSpec::constant(0.0);
    std::optional<PicardConfig> picard;  // defaults derived from the driver
    std::uint64_t seed = 0;
    int num_paths = 1000;
    std::vector<double> eps_list;
    std::vector<int> mesh_list;
    double zigzag_amplitude = 0.3;
    bool warm_start_from_scheme = false;
    TerminalSpec perturbation = TerminalSpec::constant(1.0);

    PicardConfig picard_config() const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);

/// Grid + tree + barriers + validation in one step.
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace rbsde
