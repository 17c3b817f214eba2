#pragma once

#include <optional>

#include "skolab/experiment.hpp"

namespace skolab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproduceResult {
    std::string id;
    std::string spec_hash;
    DiagnosticsReport report;
    std::vector<CheckResult> checks;

    bool pass() const;
    /// Deterministic pass/fail table; identical bytes for identical seeds.
    std::string table() const;
};

std::vector<std::string> reproduce_ids();

/// Runs the pinned experiment for one registry id and evaluates its pinned
/// expectations. An n override narrows the scale grid to that single value;
/// checks needing the full grid are then reported as skipped.
ReproduceResult run_reproduce(const std::string& id, std::optional<std::size_t> n_override = {},
                              bool parallel = true);

} // namespace skolab
