#pragma once

#include <optional>
#include <string>
#include <vector>

#include "usv/engine.hpp"

namespace usv::engine {

/// Names of the bundled scenarios, in listing order.
std::vector<std::string> preset_names();

/// One-line description of a preset; empty for unknown names.
std::string preset_description(const std::string& name);

std::optional<Scenario> preset(const std::string& name);

}  // namespace usv::engine
