#pragma once

#include <functional>

#include "skolab/constructions.hpp"
#include "skolab/report.hpp"

namespace skolab {

/// One scalar functional evaluated per replica. Parameters not used by a kind
/// are ignored.
struct FunctionalSpec {
    std::string kind; // integral_at | sup_norm | tv | quad_var | w_hat | n_delta |
                      // w_prime | w_dprime | metric_to_reference | integral_pair_m1 | scalar
    double t = 1.0;
    double T = 1.0;
    double delta = 0.1;
    double theta = 0.1;
    std::string on = "x";     // which bundle path the functional reads
    std::string metric = "m1"; // metric_to_reference
    std::string scalar;        // construction-native scalar name

    std::string label() const;
    static FunctionalSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentSpec {
    std::string construction;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::size_t> n_grid = {100, 1000, 10000};
    std::size_t replicas = 200;
    std::vector<FunctionalSpec> functionals;
    std::uint64_t seed = 0;
    std::string sink;

    static ExperimentSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    std::string hash() const;
};

/// Number of worker threads honoring the SKOLAB_THREADS cap.
std::size_t effective_threads();

/// Per-replica evaluation hook: receives the bundle and appends
/// (functional label, param label, indicator?, value) rows.
struct CellValue {
    std::string functional;
    std::string param;
    bool indicator = false;
    double value = 0.0;
};
using ReplicaEvaluator = std::function<void(const PathBundle&, std::size_t n, std::vector<CellValue>&)>;

/// Replica-parallel experiment core. Results are deterministic in the seed
/// regardless of the parallelism degree; `parallel = false` runs the serial
/// reference implementation, kept to pin down the parallel one in tests.
DiagnosticsReport run_replicas(const std::string& construction, const nlohmann::json& params,
                               const std::vector<std::size_t>& n_grid, std::size_t replicas,
                               std::uint64_t seed, const ReplicaEvaluator& evaluator,
                               const std::string& spec_hash, bool parallel = true);

DiagnosticsReport run_experiment(const ExperimentSpec& spec, bool parallel = true);

/// Good-decomposition diagnostics: TV tail probabilities of the finite
/// variation part over R_grid and stopped-jump means of the martingale part
/// over c_grid, plus their raw statistics.
DiagnosticsReport gd_diagnostics(const ExperimentSpec& base, double t,
                                 const std::vector<double>& c_grid,
                                 const std::vector<double>& R_grid, bool parallel = true);

/// P(w_hat_delta(H, X) > gamma) over (delta, n).
DiagnosticsReport avci_estimate(const ExperimentSpec& base, const std::vector<double>& delta_grid,
                                double gamma, double T, bool parallel = true);

/// Quantile curves of |H|*_T and N_delta(H): the integrand-side conditions.
DiagnosticsReport f_conditions_report(const ExperimentSpec& base,
                                      const std::vector<double>& delta_grid, double T,
                                      bool parallel = true);

/// Worst-over-k probability that the integrator moves by more than lambda
/// within delta past a partition epoch, per (n, delta).
DiagnosticsReport restart_increment_estimate(const ExperimentSpec& base,
                                             const std::vector<double>& delta_grid, double lambda,
                                             double T, bool parallel = true);

/// Quantiles of w', w'' and the sup norm over (n, theta).
DiagnosticsReport tightness_report(const ExperimentSpec& base, const std::vector<double>& theta_grid,
                                   double T, bool parallel = true);

struct TrendSummary {
    std::vector<TrendLine> lines;
};

/// Monotonicity verdicts and log-log slopes per functional across >= 3 scales.
TrendSummary convergence_trend(const std::vector<DiagnosticsReport>& reports);

} // namespace skolab
