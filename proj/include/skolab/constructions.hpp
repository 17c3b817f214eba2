#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "skolab/processes.hpp"

namespace skolab {

/// Everything a construction can hand to the experiment runner for one
/// (n, replica): the realized paths, internals, closed-form references, and
/// any construction-native scalar values.
struct PathBundle {
    std::optional<StepPath> h;
    std::optional<StepPath> x;
    std::optional<StepPath> martingale;
    std::optional<StepPath> finite_variation;
    std::optional<StepPath> count;
    std::vector<double> epochs;
    std::optional<StepPath> h_limit;
    std::optional<StepPath> x_limit;
    std::map<std::string, double> scalars;

    const StepPath& primary() const;
    const StepPath& on(const std::string& target) const;
};

/// Instantiate a registered construction. Parameters are a JSON object; the
/// scale index n is passed separately so experiments can sweep it.
PathBundle make_construction(const std::string& id, const nlohmann::json& params, std::size_t n,
                             Seed seed);

std::vector<std::string> construction_ids();

/// One row per construction: id, parameters with defaults, outputs.
std::string construction_registry_table();

} // namespace skolab
