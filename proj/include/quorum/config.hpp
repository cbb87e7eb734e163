#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "quorum/orchestrator.hpp"

namespace quorum {

// Loads and validates a run configuration file. Relative paths inside the
// file resolve against the file's directory. Throws ConfigError carrying
// every violation found.
RunConfig load_run_config(const std::filesystem::path& path);

RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir);

nlohmann::json agent_config_to_json(const AgentConfig& config);
AgentConfig agent_config_from_json(const nlohmann::json& j, std::string* error_prefix_out = nullptr);

// The resolved configuration as embedded in dataset headers. Excludes
// output-location fields so reruns into different directories stay
// byte-identical.
nlohmann::json run_config_snapshot(const RunConfig& config);

// Checks the run environment before any request: every http agent's API key
// variable must be set and the topic map must load. Throws ConfigError.
void preflight_run_config(const RunConfig& config);

}  // namespace quorum
