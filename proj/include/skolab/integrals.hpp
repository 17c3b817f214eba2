#pragma once

#include "skolab/graph.hpp"
#include "skolab/step_path.hpp"

namespace skolab {

enum class PartitionKind { DeterministicGrid, Adaptive };

struct Partition {
    std::vector<double> times; // strictly increasing, starting at 0, final <= horizon
    PartitionKind kind = PartitionKind::DeterministicGrid;

    static Partition uniform(double horizon, std::size_t cells);
    void validate(double horizon) const;
};

/// Simple integral of the left-limit version of h against z:
/// int_0^t h(s-) dz(s) = sum over jump times s <= t of h(s-) * dz(s),
/// componentwise. Exact for step paths.
Vec simple_integral_at(const StepPath& h, const StepPath& z, double t);

/// Full integral process as a StepPath; breakpoints are a subset of z's.
StepPath simple_integral(const StepPath& h, const StepPath& z);

/// Dot-product reducer: sums the componentwise integrals.
double simple_integral_dot(const StepPath& h, const StepPath& z, double t);

/// Quadratic covariation [x, y]: pure-jump path of cumulated jump products,
/// coordinatewise. Satisfies integration by parts exactly on step pairs.
StepPath quad_covariation(const StepPath& x, const StepPath& y);

/// I_rho(x): step path sampling x at the partition times, right-continuous.
StepPath discretize_grid(const StepPath& x, const Partition& grid);

/// Refines each grid cell at the epsilon-increment crossing times of x; the
/// induced discretization stays uniformly within epsilon of x. Infima over
/// continuous time are computed on the breakpoint grid, exact for step paths.
Partition adaptive_partition(const StepPath& x, const Partition& grid, double epsilon);

/// Sup over [0, T] of the gap between the coarse-grid simple integral of h
/// against x and the adaptively refined one.
double discretization_gap(const StepPath& h, const StepPath& x, const Partition& grid,
                          double epsilon, double T);

/// Parametric representation of the simple integral: given a representation
/// (u, r) of the amalgamated pair (h, z) and the jump times of h, builds the
/// integral component so that ((u1, u2, w), r) represents (h, z, int h- dz).
ParamRep integral_param_rep(const ParamRep& rep, const std::vector<double>& h_jump_times,
                            double horizon);

} // namespace skolab
