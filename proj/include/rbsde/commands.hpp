#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbsde/config.hpp"

namespace rbsde {

/// Exit-status contract of the batch commands.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kValidationError = 2,
    kNoConvergence = 3,
    kCheckFailure = 4,
};

int cmd_esm_check(const ScenarioConfig& cfg, int num_paths, std::uint64_t seed,
                  const std::string& out_dir);

int cmd_solve(const ScenarioConfig& cfg, const std::string& out_dir);

int cmd_depend(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
               const std::string& out_dir);

int cmd_local_time(const ScenarioConfig& cfg, const std::vector<int>& mesh_list,
                   int num_paths, std::uint64_t seed, const std::string& out_dir);

int cmd_converge(const ScenarioConfig& cfg, const std::vector<int>& mesh_list,
                 const std::string& out_dir);

}  // namespace rbsde
