#pragma once

#include <vector>

#include "skolab/step_path.hpp"

namespace skolab {

/// One vertex of a completed graph: a point in value x time space.
struct GraphVertex {
    Vec value;
    double time;
};

/// Completed graph of a step path as an ordered polyline. Vertices alternate
/// horizontal (time advances, value fixed) and vertical (jump segment from
/// left limit to value) moves, traversed in the graph order: time increasing,
/// ties at a jump ordered by distance from the left limit.
struct GraphPolyline {
    std::vector<GraphVertex> vertices;
    std::size_t dim = 0;
    double horizon = 0.0;

    std::size_t size() const { return vertices.size(); }
};

GraphPolyline completed_graph(const StepPath& path);

/// Distance from (value, time) to the polyline under the ground metric
/// max(euclidean value distance, |time difference|).
double graph_distance(const GraphPolyline& g, const Vec& value, double time);

bool on_graph(const GraphPolyline& g, const Vec& value, double time, double tol = 1e-12);

/// Discrete parametric representation: samples (u[j], r[j]) at parameters
/// grid[j] in [0, 1], nondecreasing along the graph order, every polyline
/// vertex included exactly.
struct ParamRep {
    std::vector<double> grid; // 0 = z_0 < ... < z_K = 1
    std::vector<Vec> u;       // values in R^d
    std::vector<double> r;    // times, nondecreasing

    std::size_t size() const { return grid.size(); }
};

/// Approximately arclength-uniform sampling of the completed graph with
/// exactly `samples` points, all vertices included. samples must be at least
/// the vertex count (RefinementTooSmall otherwise).
ParamRep param_rep(const StepPath& path, std::size_t samples);

} // namespace skolab
