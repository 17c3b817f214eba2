#pragma once

#include <string>

#include "json.hpp"
#include "skolab/step_path.hpp"

namespace skolab {

/// JSON object {dim, horizon, breakpoints, values}; round-trips bit-exactly.
nlohmann::json path_to_json(const StepPath& path);
StepPath path_from_json(const nlohmann::json& j);

StepPath load_path(const std::string& file);
void save_path(const StepPath& path, const std::string& file);

/// CSV with header t,v1..vd; each row is a right-continuous segment start.
/// A final row repeating the last value marks the horizon.
std::string path_to_csv(const StepPath& path);
StepPath path_from_csv(const std::string& csv);

} // namespace skolab
