#pragma once

#include "skolab/graph.hpp"
#include "skolab/step_path.hpp"

namespace skolab {

enum class MetricMode { Exact, UpperBound };
enum class BaseMetric { Uniform, J1, M1 };

struct MetricOptions {
    double tolerance = 1e-6;     // bisection / refinement target for approximate infima
    MetricMode mode = MetricMode::Exact;
    BaseMetric base = BaseMetric::Uniform; // half-line base metric
    double t_max = 20.0;         // half-line truncation (tail < 3e-9)
    std::size_t quadrature = 256;
};

/// Exact sup over [0, T] of |x - y| (euclidean), via the merged segment grid.
double uniform_distance(const StepPath& x, const StepPath& y, double T);

/// J1 metric. Exact mode: dynamic program over monotone alignments of the two
/// breakpoint sequences. UpperBound mode: search over piecewise-linear time
/// changes with knots on a candidate grid; always >= the exact value and
/// within opts.tolerance of it.
double j1_distance(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts = {});

/// M1 metric = Frechet distance between completed-graph polylines under the
/// ground metric max(value distance, time distance); free-space decision
/// procedure plus bisection. Returned value is an upper bound within
/// opts.tolerance of the infimum.
double m1_distance(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts = {});

/// Decision procedure behind m1_distance: is d_M1(x|T, y|T) <= eps?
/// An infeasible eps certifies the lower bound d_M1 >= eps.
bool m1_within(const StepPath& x, const StepPath& y, double T, double eps);

/// Product (weak) M1 distance: max of coordinatewise m1_distance. Experimental.
double m1_distance_weak(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts = {});

/// Half-line metric: integral of e^{-T} (rho_[0,T] ^ 1) dT, trapezoid over a
/// grid jittered off breakpoint times, truncated at opts.t_max.
double halfline_distance(const StepPath& x, const StepPath& y, const MetricOptions& opts = {});

/// J1 oscillation modulus w': minimum over partitions of [0, T] with mesh at
/// least theta of the largest within-cell oscillation.
double w_prime(const StepPath& x, double theta, double T);

/// M1 oscillation modulus w'': max of the three-point segment deviation term
/// and the endpoint oscillations at 0 and T.
double w_dprime(const StepPath& x, double theta, double T);

/// Largest consecutive-increment functional: sup over coordinates and triples
/// s < t < u <= (s + delta) ^ T of |h_i(s) - h_i(t)| ^ |x_i(t) - x_i(u)|.
/// For step paths the sup is attained on the merged breakpoint grid with both
/// one-sided values, which is what is enumerated here.
double consecutive_increment(const StepPath& h, const StepPath& x, double delta, double T);

/// Maximal number of disjoint ordered increment pairs of size >= delta in [0, T].
std::size_t increment_count(const StepPath& x, double delta, double T);

} // namespace skolab
