#include "skolab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace skolab {

GraphPolyline completed_graph(const StepPath& path) {
    GraphPolyline g;
    g.dim = path.dim();
    g.horizon = path.horizon();
    const StepPath p = path.normalized();
    const auto& bp = p.breakpoints();
    const auto& vals = p.values();
    g.vertices.push_back({vals[0], 0.0});
    for (std::size_t i = 1; i < bp.size(); ++i) {
        g.vertices.push_back({vals[i - 1], bp[i]}); // left limit at the jump time
        g.vertices.push_back({vals[i], bp[i]});     // value after the jump
    }
    if (g.vertices.back().time < p.horizon() || g.vertices.size() == 1)
        g.vertices.push_back({vals.back(), p.horizon()});
    return g;
}

namespace {

double ground_dist(const Vec& v1, double t1, const Vec& v2, double t2) {
    return std::max(norm2_diff(v1, v2), std::fabs(t1 - t2));
}

// Distance from a point to the segment between two polyline vertices under
// the max(value, time) ground metric, minimized over the segment parameter.
double point_segment_dist(const Vec& value, double time, const GraphVertex& a, const GraphVertex& b) {
    // Ternary search over the segment parameter: both coordinates of the
    // objective are convex in the parameter, so their max is convex too.
    double lo = 0.0, hi = 1.0;
    auto eval = [&](double s) {
        double dt = std::fabs((1 - s) * a.time + s * b.time - time);
        double dv2 = 0.0;
        for (std::size_t k = 0; k < value.size(); ++k) {
            const double d = (1 - s) * a.value[k] + s * b.value[k] - value[k];
            dv2 += d * d;
        }
        return std::max(std::sqrt(dv2), dt);
    };
    for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (eval(m1) <= eval(m2)) hi = m2;
        else lo = m1;
    }
    return std::min({eval(0.0), eval(lo), eval(1.0)});
}

} // namespace

double graph_distance(const GraphPolyline& g, const Vec& value, double time) {
    double best = ground_dist(value, time, g.vertices[0].value, g.vertices[0].time);
    for (std::size_t i = 1; i < g.vertices.size(); ++i)
        best = std::min(best, point_segment_dist(value, time, g.vertices[i - 1], g.vertices[i]));
    return best;
}

bool on_graph(const GraphPolyline& g, const Vec& value, double time, double tol) {
    return graph_distance(g, value, time) <= tol;
}

ParamRep param_rep(const StepPath& path, std::size_t samples) {
    const GraphPolyline g = completed_graph(path);
    const std::size_t m = g.size();
    if (samples < m) fail(ErrorCode::RefinementTooSmall, "fewer samples than polyline vertices");

    // Arclength of each polyline segment in value x time space.
    std::vector<double> cum(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double dv = norm2_diff(g.vertices[i].value, g.vertices[i - 1].value);
        const double dt = g.vertices[i].time - g.vertices[i - 1].time;
        cum[i] = cum[i - 1] + std::hypot(dv, dt);
    }
    const double total = cum.back() > 0.0 ? cum.back() : 1.0;

    // Sample points: (segment index, local fraction). Start from the vertices,
    // then split the currently longest gap until the count is reached.
    struct Pt {
        std::size_t seg; // vertex index this point is on or after
        double frac;     // 0 at vertex seg, 1 at vertex seg+1
        double arc;
    };
    std::vector<Pt> pts;
    pts.reserve(samples);
    for (std::size_t i = 0; i < m; ++i) pts.push_back({i, 0.0, cum[i]});
    auto arc_gap = [&](std::size_t j) { return pts[j + 1].arc - pts[j].arc; };
    while (pts.size() < samples) {
        std::size_t widest = 0;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j)
            if (arc_gap(j) > arc_gap(widest)) widest = j;
        const Pt& a = pts[widest];
        const Pt& b = pts[widest + 1];
        Pt mid;
        mid.arc = 0.5 * (a.arc + b.arc);
        mid.seg = a.seg;
        mid.frac = b.seg == a.seg ? 0.5 * (a.frac + b.frac) : 0.5 * (a.frac + 1.0);
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(widest) + 1, mid);
    }

    ParamRep rep;
    rep.grid.reserve(samples);
    rep.u.reserve(samples);
    rep.r.reserve(samples);
    double prev_z = -1.0;
    for (const Pt& p : pts) {
        double z = p.arc / total;
        if (z <= prev_z) z = std::nextafter(prev_z, 2.0); // keep the grid strictly increasing
        prev_z = z;
        rep.grid.push_back(z);
        if (p.frac == 0.0) {
            rep.u.push_back(g.vertices[p.seg].value);
            rep.r.push_back(g.vertices[p.seg].time);
        } else {
            const GraphVertex& a = g.vertices[p.seg];
            const GraphVertex& b = g.vertices[p.seg + 1];
            Vec v(g.dim);
            for (std::size_t k = 0; k < g.dim; ++k)
                v[k] = a.value[k] + p.frac * (b.value[k] - a.value[k]);
            rep.u.push_back(std::move(v));
            rep.r.push_back(a.time + p.frac * (b.time - a.time));
        }
    }
    rep.grid.front() = 0.0;
    rep.grid.back() = 1.0;
    return rep;
}

} // namespace skolab
