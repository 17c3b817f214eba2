#pragma once

#include <cstddef>
#include <vector>

#include "skolab/errors.hpp"

namespace skolab {

using Vec = std::vector<double>;

double norm2(const Vec& v);
double norm2_diff(const Vec& a, const Vec& b);

enum class Side { Left, Right };

/// Piecewise-constant cadlag path on [0, horizon] in d dimensions.
/// values[i] is the path value on [breakpoints[i], breakpoints[i+1]), the last
/// segment extending to the horizon, closed at the horizon. Immutable after
/// construction; all operations on it are pure.
class StepPath {
public:
    StepPath(std::size_t dim, double horizon, std::vector<double> breakpoints,
             std::vector<Vec> values);

    static StepPath constant(std::size_t dim, double horizon, Vec value);
    static StepPath zero(std::size_t dim, double horizon);
    /// Indicator c * 1_{[from, horizon]} in one dimension.
    static StepPath indicator(double horizon, double from, double c = 1.0);

    std::size_t dim() const { return dim_; }
    double horizon() const { return horizon_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Vec>& values() const { return values_; }
    std::size_t segments() const { return values_.size(); }

    /// Index of the segment whose half-open interval contains t.
    std::size_t segment_index(double t) const;

    Vec evaluate(double t, Side side = Side::Right) const;
    double evaluate1(double t, Side side = Side::Right) const;

    /// Nonzero jumps (time, delta), sorted by time. Zero-size breakpoints excluded.
    std::vector<std::pair<double, Vec>> jumps() const;

    /// Per-coordinate total variation over (a, b].
    Vec total_variation(double a, double b) const;
    double total_variation_sum(double a, double b) const;

    /// Drops zero-size breakpoints; the path as a function is unchanged.
    StepPath normalized() const;

    /// Restriction to [0, T] (T <= horizon) or constant extension past it.
    StepPath restrict(double T) const;
    StepPath extend(double T) const;

    bool same_bits(const StepPath& other) const;

private:
    std::size_t dim_;
    double horizon_;
    std::vector<double> breakpoints_;
    std::vector<Vec> values_;
};

/// J_delta: pure-jump path keeping the excess of every jump over delta,
/// jump at s mapped to ((1 - delta/|dx(s)|) v 0) * dx(s). Starts at 0.
/// delta = infinity is a valid sentinel and gives the zero path.
StepPath truncate_jumps(const StepPath& path, double delta);

/// Companion x - J_delta(x); all of its jumps have size <= delta.
StepPath remove_large_jumps(const StepPath& path, double delta);

void require_same_dim(const StepPath& a, const StepPath& b);
void require_same_horizon(const StepPath& a, const StepPath& b);

/// Sorted union of the two paths' breakpoint times.
std::vector<double> merged_breakpoints(const StepPath& a, const StepPath& b);

/// Componentwise amalgamation (a, b) as a single (dim_a + dim_b)-path.
StepPath amalgamate(const StepPath& a, const StepPath& b);
StepPath amalgamate(const std::vector<const StepPath*>& parts);

} // namespace skolab
