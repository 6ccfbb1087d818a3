#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usv/engine.hpp"

namespace usv::cli {

inline constexpr int kSchemaVersion = 1;

/// Scenario file problem, with the source name and a line/field location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serializes every field, so the result names all keys --set accepts.
nlohmann::json scenario_to_json(const engine::Scenario& sc);

/// Strict reader: unknown keys and wrong types are errors naming the field.
engine::Scenario scenario_from_json(const nlohmann::json& j);

/// Parses text and reports syntax errors as "<source>:<line>:<col>: ...".
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

/// Applies "dotted.path=value" to j. The path must already exist. The value
/// is read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

engine::Scenario load_scenario_file(const std::string& path,
                                    const std::vector<std::string>& overrides = {});

}  // namespace usv::cli
