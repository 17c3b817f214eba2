#pragma once

#include <functional>
#include <optional>
#include <string>

#include "skolab/innovations.hpp"
#include "skolab/step_path.hpp"

namespace skolab {

/// Stream component tags; each generator component draws from its own stream.
enum StreamTag : std::uint64_t {
    StreamInnovations = 1,
    StreamWaits = 2,
    StreamSigns = 3,
    StreamJumpTime = 4,
};

struct CtrwConfig {
    double alpha = 1.5;                 // stability index of the jumps
    std::optional<double> beta;         // waiting index; empty = deterministic unit waits
    std::vector<double> coeffs = {1.0}; // c_0, c_1, ..., c_J >= 0, c_0 > 0
    bool coupled = false;
    std::size_t scale_n = 1;
    double horizon = 1.0;
    InnovationModel innovations = {InnovationKind::ParetoRademacher, 1.5};
    double wait_x_min = 1.0;

    void validate() const;
    double jump_scale_exponent() const { return (beta ? *beta : 1.0) / alpha; }
};

/// Scaled partial-sum path of the linear process sum_j c_j theta_{k-j}:
/// breakpoints k/n, jump at k/n equal to n^{-1/alpha} zeta_k.
StepPath moving_average_path(const CtrwConfig& config, Seed seed);

struct CtrwPath {
    StepPath path;  // X^n
    StepPath count; // renewal count N(n .)
    std::vector<double> epochs;      // jump times within [0, T]
    std::vector<double> jump_sizes;  // scaled jumps n^{-beta/alpha} zeta_k
    std::vector<double> theta;       // raw innovations; the first J entries are
                                     // the pre-period draws, theta[J + k - 1]
                                     // belongs to jump k (J = coeffs.size() - 1)
};

/// CTRW with renewal jump times L_k / n and jump sizes n^{-beta/alpha} zeta_k.
/// Uncoupled: waits drawn independently of the jumps. Coupled: one uniform per
/// step drives both; the jump magnitude is wait^{beta/alpha} (a Pareto(alpha)
/// variable), symmetrized by an independent sign.
CtrwPath ctrw_path(const CtrwConfig& config, Seed seed);

struct GoodDecomposition {
    StepPath martingale; // compensated small-jump component
    StepPath large;      // jumps of size > 1
    StepPath drift;      // N(nt) * E[zeta 1{|zeta| <= 1}]
    double drift_per_step = 0.0;
};

/// Small-jump / large-jump / drift split of an uncorrelated CTRW. The three
/// components sum back to the path bit-exactly at every breakpoint whenever
/// the drift term vanishes (symmetric innovations); with a drift the identity
/// holds to the recomposition granularity (a few ulps under cancellation).
GoodDecomposition ctrw_decompose(const CtrwConfig& config, const CtrwPath& ctrw);

// --- single-jump martingale -------------------------------------------------

struct SingleJumpMartingale {
    double tau = 0.0;
    double psi_tau = 0.0;
    StepPath path = StepPath::zero(1, 1.0); // grid-sampled approximation of M
    int n = 0;
    double T = 0.0;
    double eps = 0.0;

    /// Closed-form M_t = psi(tau) 1{tau <= t} - lambda(t ^ tau) / T.
    double value_at(double t) const;
};

double single_jump_psi(int n, double T, double eps, double t);

/// tau ~ (1 - eps) Leb/T + eps delta_T, the jump-time mixture.
double single_jump_tau(double T, double eps, Seed seed);
double single_jump_lambda(int n, double T, double t);

/// Oscillation-resolving grid on [0, T]: window endpoints plus every extremum
/// of the compensator's sin(1/g) factor, densified by `extra_per_period`.
std::vector<double> single_jump_grid(int n, double T, std::size_t extra_per_period = 2);

/// The deterministic compensator t -> lambda(t), sampled on the grid above;
/// on {tau = T} this is the full compensator path.
StepPath single_jump_compensator(int n, double T, std::size_t extra_per_period = 2);

SingleJumpMartingale single_jump_martingale(int n, double T, double eps, Seed seed,
                                            std::size_t extra_per_period = 2);

// --- exploding integrals for single-delay moving averages -------------------

struct ExplodingPair {
    StepPath h;
    StepPath x;
    std::vector<double> z; // Z_0 .. Z_m
    double amplitude = 0.0; // n^{-epsilon}
};

/// Integrand flipping to +n^{-eps} sgn(Z_k) exactly at sign changes of the
/// innovations, against the single-delay moving average of the same draws;
/// every flip step contributes an exact -n^{-eps} |Z_k| to the lagged part of
/// the integrator, so the integrals diverge upwards.
ExplodingPair exploding_pair(std::size_t n, double alpha, double epsilon, double x_min,
                             double T, Seed seed);

// --- crossing walk -----------------------------------------------------------

struct CrossingWalk {
    StepPath h = StepPath::zero(1, 1.0);
    std::optional<StepPath> x; // omitted for very long walks unless requested
    long long r = 0;           // number of zeros before the cap
    double cap = 0.0;          // 2 n^{-1/4}
    double unit = 0.0;         // n^{-1/2}
    long long integral_units = 0; // int_0^T H dX in units of n^{-1/2}, exact
    long long rhs_units = 0;      // r + sign-corrected remainder, exact
    long long max_abs_walk = 0;   // max |S_k|, so |X|* = unit * max_abs_walk
};

CrossingWalk crossing_pair(std::size_t n, double T, Seed seed, bool build_x = true);

// --- named deterministic examples -------------------------------------------

struct DeterministicExample {
    std::optional<StepPath> h;
    StepPath x;
    std::optional<StepPath> h_limit;
    std::optional<StepPath> x_limit;
};

/// id in {alternating, sawtooth, zigzag, fig6}.
DeterministicExample deterministic_example(const std::string& id, std::size_t n);

// --- delayed readout integrand ----------------------------------------------

using ReadoutFn = std::function<double(double, double)>;

/// H_t = g(t_i, X at the J-delayed last jump epoch) on [t_i, t_{i+1});
/// an empty max falls back to the sentinel (the path's initial value).
StepPath delayed_readout_integrand(const CtrwPath& ctrw, const std::vector<double>& times,
                                   const ReadoutFn& g, std::size_t delay);

ReadoutFn readout_by_name(const std::string& name);

// --- inverse subordinator ----------------------------------------------------

struct InverseSubordinator {
    StepPath path;              // D^{-1} sampled as a staircase on [0, T]
    std::vector<double> epochs; // scaled renewal epochs L_k / n^{1/beta}
};

InverseSubordinator inverse_subordinator_path(double beta, std::size_t n, double T, Seed seed,
                                              double wait_x_min = 1.0, bool unit_waits = false);

} // namespace skolab
