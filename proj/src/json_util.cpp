#include "json_util.hpp"

#include <stdexcept>

#include "affectlog/io.hpp"

namespace affectlog::detail {

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad JSON in " + path.string() + ": " +
                             e.what());
  }
}

ThresholdParams threshold_from_json(const nlohmann::json& j,
                                    const std::string& context) {
  if (!j.is_object() || !j.contains("theta_f") || !j.contains("theta_p") ||
      !j.contains("theta_n"))
    throw std::runtime_error(context +
                             ": expected {theta_f, theta_p, theta_n}");
  ThresholdParams params;
  try {
    params.theta_f = j["theta_f"].get<std::uint64_t>();
    params.theta_p = j["theta_p"].get<double>();
    params.theta_n = j["theta_n"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
  return params;
}

std::filesystem::path resolve_path(const std::filesystem::path& base_dir,
                                   const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace affectlog::detail
