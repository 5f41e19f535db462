// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "pinch/config.hpp"
#include "pinch/geometry.hpp"
#include "pinch/solution.hpp"

namespace pinch
{

using json = nlohmann::json;

/// Reads a whole file; the error names the path.
std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

/// Config keys are the SystemConfig field names. "power_dbm" and "noise_dbm"
/// may replace power_budget_w and noise_w; "execution" is "serial" or
/// "parallel". Missing keys keep their defaults, unknown keys are rejected.
SystemConfig config_from_json(const json &j, SystemConfig base = {});
json config_to_json(const SystemConfig &config);
SystemConfig load_config(const std::filesystem::path &path);

/// {"groups": [[0, 1], [2]], "users": [[x, y, z], ...], "noise_w": value or
/// per-user array} with "noise_dbm" accepted in place of noise_w.
Topology topology_from_json(const json &j);
json topology_to_json(const Topology &topology);
Topology load_topology(const std::filesystem::path &path);

/// Non-finite numbers become null.
json solution_to_json(const SchemeSolution &solution);

} // namespace pinch
