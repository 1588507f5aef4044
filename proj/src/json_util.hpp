#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "affectlog/stats.hpp"

// Internal JSON plumbing shared by the config loaders; not installed.
namespace affectlog::detail {

nlohmann::json parse_json_file(const std::filesystem::path& path);

// Reads {"theta_f": count, "theta_p": prob, "theta_n": count} and validates.
ThresholdParams threshold_from_json(const nlohmann::json& j,
                                    const std::string& context);

// Relative paths in config files resolve against the config's directory.
std::filesystem::path resolve_path(const std::filesystem::path& base_dir,
                                   const std::string& p);

}  // namespace affectlog::detail
