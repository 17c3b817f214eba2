#include "skolab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_to_interval(double x, double lo, double hi) {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
}

// Lexicographic order on (breakpoints, values); used to canonicalize argument
// order so that distance(x, y) and distance(y, x) are computed identically.
bool path_lex_less(const StepPath& a, const StepPath& b) {
    if (a.breakpoints() != b.breakpoints()) return a.breakpoints() < b.breakpoints();
    return a.values() < b.values();
}

struct Restricted {
    StepPath x;
    StepPath y;
};

Restricted prepare(const StepPath& x, const StepPath& y, double T) {
    require_same_dim(x, y);
    if (T > x.horizon() || T > y.horizon()) fail(ErrorCode::HorizonExceeded, "T past a horizon");
    return {x.restrict(T).normalized(), y.restrict(T).normalized()};
}

} // namespace

double uniform_distance(const StepPath& x, const StepPath& y, double T) {
    require_same_dim(x, y);
    if (T > x.horizon() || T > y.horizon()) fail(ErrorCode::HorizonExceeded, "T past a horizon");
    double best = 0.0;
    for (double t : merged_breakpoints(x, y)) {
        if (t > T) break;
        best = std::max(best, norm2_diff(x.values()[x.segment_index(t)], y.values()[y.segment_index(t)]));
    }
    return best;
}

// ---------------------------------------------------------------------------
// J1: exact dynamic program.
//
// A time change lambda acts on x only; the induced pair (x o lambda, y) is
// determined by a monotone alignment of the two jump sequences. Every state
// (segment i of x active against segment j of y) on the alignment contributes
// its value mismatch to the sup norm; a matched pair of jumps costs the time
// displacement |sx_i - sy_j|; an unmatched x-jump placed inside y's segment j
// costs its distance to the closed window [sy_j, sy_{j+1}] (the closure
// realizes the infimum over strict placements). Jumps at exactly T cannot be
// moved, so they only match jumps at T or land in y's final segment.
// ---------------------------------------------------------------------------
namespace {

double j1_exact(const StepPath& x, const StepPath& y, double T) {
    const auto& ax = x.values();
    const auto& by = y.values();
    const std::size_t p = ax.size() - 1, q = by.size() - 1;
    auto sx = [&](std::size_t i) { return x.breakpoints()[i]; };
    auto sy = [&](std::size_t j) { return j <= q ? y.breakpoints()[j] : T; };

    std::vector<double> prev(q + 1), curr(q + 1);
    for (std::size_t j = 0; j <= q; ++j) {
        double c = j == 0 ? 0.0 : prev[j - 1];
        prev[j] = std::max(c, norm2_diff(ax[0], by[j]));
    }
    for (std::size_t i = 1; i <= p; ++i) {
        for (std::size_t j = 0; j <= q; ++j) {
            const bool x_at_T = sx(i) == T;
            double best = kInf;
            // x-jump i matched with y-jump j.
            if (j >= 1) {
                const bool y_at_T = sy(j) == T;
                if (x_at_T == y_at_T)
                    best = std::min(best, std::max(prev[j - 1], std::fabs(sx(i) - sy(j))));
            }
            // x-jump i placed inside y's segment j.
            if (!x_at_T || j == q) {
                const double placement = dist_to_interval(sx(i), sy(j), sy(j + 1));
                best = std::min(best, std::max(prev[j], placement));
            }
            // y-jump j left where it is.
            if (j >= 1) best = std::min(best, curr[j - 1]);
            curr[j] = std::max(best, norm2_diff(ax[i], by[j]));
        }
        std::swap(prev, curr);
    }
    return prev[q];
}

// Upper bound: evaluate genuine piecewise-linear time changes whose knots move
// x's jumps onto a candidate position grid. The exact optimum places each jump
// at its own time or clamps it to a y-breakpoint, so the grid contains those
// positions plus small offsets to break ties; the result is always an upper
// bound and within opts.tolerance of the exact value.
double j1_upper_bound(const StepPath& x, const StepPath& y, double T, double tolerance) {
    const auto& ax = x.values();
    const auto& by = y.values();
    const std::size_t p = ax.size() - 1, q = by.size() - 1;
    if (p == 0) {
        double best = 0.0;
        for (std::size_t j = 0; j <= q; ++j) best = std::max(best, norm2_diff(ax[0], by[j]));
        return best;
    }
    const double h = tolerance / (2.0 * static_cast<double>(p) + 2.0);

    std::vector<double> cand;
    for (std::size_t i = 1; i <= p; ++i) cand.push_back(x.breakpoints()[i]);
    for (std::size_t j = 1; j <= q; ++j)
        for (std::size_t m = 0; m <= p; ++m) {
            cand.push_back(y.breakpoints()[j] + static_cast<double>(m) * h);
            if (m > 0) cand.push_back(y.breakpoints()[j] - static_cast<double>(m) * h);
        }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::erase_if(cand, [&](double c) { return c <= 0.0 || c > T; });

    const std::size_t nc = cand.size();
    // mismatch[i][j], range-max over j via running prefix per query below.
    auto val = [&](std::size_t i, std::size_t j) { return norm2_diff(ax[i], by[j]); };
    // yseg(t): segment of y containing t; yseg_left(t): segment just before t.
    auto yseg = [&](double t) { return y.segment_index(t); };
    auto yseg_left = [&](double t) {
        std::size_t j = y.segment_index(t);
        if (j > 0 && y.breakpoints()[j] == t) --j;
        return j;
    };
    // sup over [a, b) of |ax_i - y|, half-open; includes y's left limit at b.
    auto edge_cost = [&](std::size_t i, double a, double b) {
        double m = 0.0;
        for (std::size_t j = yseg(a), e = yseg_left(b); j <= e; ++j) m = std::max(m, val(i, j));
        return m;
    };
    auto edge_cost_closed = [&](std::size_t i, double a) {
        double m = 0.0;
        for (std::size_t j = yseg(a); j <= q; ++j) m = std::max(m, val(i, j));
        return m;
    };

    std::vector<double> prev(nc, kInf), curr(nc, kInf);
    for (std::size_t c = 0; c < nc; ++c) {
        if (x.breakpoints()[1] == T && cand[c] != T) continue;
        if (cand[c] == T && x.breakpoints()[1] != T) continue;
        prev[c] = std::max(std::fabs(cand[c] - x.breakpoints()[1]), edge_cost(0, 0.0, cand[c]));
    }
    for (std::size_t i = 2; i <= p; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        // running minimum over c' < c of prev[c'] extended by the dwell edge
        // is not separable, so do the quadratic sweep; candidate counts are small.
        for (std::size_t c = 1; c < nc; ++c) {
            if (x.breakpoints()[i] == T && cand[c] != T) continue;
            if (cand[c] == T && x.breakpoints()[i] != T) continue;
            double best = kInf;
            for (std::size_t c0 = 0; c0 < c; ++c0) {
                if (prev[c0] == kInf) continue;
                const double dwell = edge_cost(i - 1, cand[c0], cand[c]);
                best = std::min(best, std::max(prev[c0], dwell));
            }
            curr[c] = std::max(best, std::fabs(cand[c] - x.breakpoints()[i]));
        }
        std::swap(prev, curr);
    }
    double answer = kInf;
    for (std::size_t c = 0; c < nc; ++c) {
        if (prev[c] == kInf) continue;
        answer = std::min(answer, std::max(prev[c], edge_cost_closed(p, cand[c])));
    }
    return answer;
}

} // namespace

double j1_distance(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts) {
    auto [a, b] = prepare(x, y, T);
    if (path_lex_less(b, a)) std::swap(a, b);
    if (opts.mode == MetricMode::UpperBound) return j1_upper_bound(a, b, T, opts.tolerance);
    return j1_exact(a, b, T);
}

// ---------------------------------------------------------------------------
// M1: Frechet distance between completed-graph polylines, ground metric
// max(value distance, time distance). Free-space decision + bisection.
// ---------------------------------------------------------------------------
namespace {

struct Interval {
    double lo = 1.0, hi = 0.0;
    bool empty() const { return lo > hi; }
};

Interval intersect(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Feasible parameter range on the segment a->b against the fixed point
// (value v, time t): both the euclidean value part and the time part are
// convex in the parameter, each yields an interval.
Interval segment_free(const GraphVertex& a, const GraphVertex& b, const Vec& v, double t, double eps) {
    Interval out{0.0, 1.0};
    // time: |(1-s) a.t + s b.t - t| <= eps
    const double dt = b.time - a.time;
    const double ct = a.time - t;
    if (dt == 0.0) {
        if (std::fabs(ct) > eps) return {1.0, 0.0};
    } else {
        double lo = (-eps - ct) / dt, hi = (eps - ct) / dt;
        if (lo > hi) std::swap(lo, hi);
        out = intersect(out, {lo, hi});
    }
    if (out.empty()) return out;
    // value: ||A + s B||^2 <= eps^2
    double aa = 0.0, ab = 0.0, bb = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double A = a.value[k] - v[k];
        const double B = b.value[k] - a.value[k];
        aa += A * A;
        ab += A * B;
        bb += B * B;
    }
    if (bb == 0.0) {
        if (aa > eps * eps) return {1.0, 0.0};
        return out;
    }
    const double disc = ab * ab - bb * (aa - eps * eps);
    if (disc < 0.0) return {1.0, 0.0};
    const double root = std::sqrt(disc);
    return intersect(out, {(-ab - root) / bb, (-ab + root) / bb});
}

bool frechet_within(const GraphPolyline& P, const GraphPolyline& Q, double eps) {
    const std::size_t n = P.size(), m = Q.size();
    if (norm2_diff(P.vertices[0].value, Q.vertices[0].value) > eps ||
        std::fabs(P.vertices[0].time - Q.vertices[0].time) > eps)
        return false;
    if (norm2_diff(P.vertices[n - 1].value, Q.vertices[m - 1].value) > eps ||
        std::fabs(P.vertices[n - 1].time - Q.vertices[m - 1].time) > eps)
        return false;
    if (n == 1 && m == 1) return true;

    // Reachable sub-intervals of the free space on cell boundaries.
    // H[i][j]: on P-segment i against Q-vertex j. V[i][j]: P-vertex i against
    // Q-segment j.
    const std::size_t cn = n - 1, cm = m - 1;
    std::vector<std::vector<Interval>> RH(std::max<std::size_t>(cn, 1),
                                          std::vector<Interval>(cm + 1, Interval{1.0, 0.0}));
    std::vector<std::vector<Interval>> RV(cn + 1,
                                          std::vector<Interval>(std::max<std::size_t>(cm, 1), Interval{1.0, 0.0}));

    auto freeH = [&](std::size_t i, std::size_t j) {
        return segment_free(P.vertices[i], P.vertices[i + 1], Q.vertices[j].value, Q.vertices[j].time, eps);
    };
    auto freeV = [&](std::size_t i, std::size_t j) {
        return segment_free(Q.vertices[j], Q.vertices[j + 1], P.vertices[i].value, P.vertices[i].time, eps);
    };

    // Seed the bottom row and left column.
    for (std::size_t i = 0; i < cn; ++i) {
        Interval f = freeH(i, 0);
        if (i > 0) {
            if (RH[i - 1][0].empty() || RH[i - 1][0].hi < 1.0 || f.lo > 0.0) f = {1.0, 0.0};
        }
        RH[i][0] = f;
        if (f.empty() && i + 1 < cn) {
            for (std::size_t k = i + 1; k < cn; ++k) RH[k][0] = {1.0, 0.0};
            break;
        }
    }
    for (std::size_t j = 0; j < cm; ++j) {
        Interval f = freeV(0, j);
        if (j > 0) {
            if (RV[0][j - 1].empty() || RV[0][j - 1].hi < 1.0 || f.lo > 0.0) f = {1.0, 0.0};
        }
        RV[0][j] = f;
        if (f.empty() && j + 1 < cm) {
            for (std::size_t k = j + 1; k < cm; ++k) RV[0][k] = {1.0, 0.0};
            break;
        }
    }

    for (std::size_t i = 0; i < cn; ++i) {
        for (std::size_t j = 0; j < cm; ++j) {
            const Interval bottom = RH[i][j];
            const Interval left = RV[i][j];
            // top edge: H[i][j+1]; right edge: V[i+1][j]
            Interval top = freeH(i, j + 1);
            Interval right = freeV(i + 1, j);
            if (!left.empty()) {
                // entering from the left allows any monotone move across the cell
            } else if (!bottom.empty()) {
                top = intersect(top, {bottom.lo, 1.0});
            } else {
                top = {1.0, 0.0};
            }
            if (!bottom.empty()) {
                // entering from the bottom allows any monotone move
            } else if (!left.empty()) {
                right = intersect(right, {left.lo, 1.0});
            } else {
                right = {1.0, 0.0};
            }
            RH[i][j + 1] = top;
            RV[i + 1][j] = right;
        }
    }
    if (cn == 0) return !RV[0][cm - 1].empty() && RV[0][cm - 1].hi >= 1.0;
    if (cm == 0) return !RH[cn - 1][0].empty() && RH[cn - 1][0].hi >= 1.0;
    const Interval top = RH[cn - 1][cm];
    const Interval right = RV[cn][cm - 1];
    return (!top.empty() && top.hi >= 1.0) || (!right.empty() && right.hi >= 1.0);
}

} // namespace

bool m1_within(const StepPath& x, const StepPath& y, double T, double eps) {
    auto [a, b] = prepare(x, y, T);
    if (path_lex_less(b, a)) std::swap(a, b);
    return frechet_within(completed_graph(a), completed_graph(b), eps);
}

double m1_distance(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts) {
    auto [a, b] = prepare(x, y, T);
    if (path_lex_less(b, a)) std::swap(a, b);
    if (a.same_bits(b)) return 0.0;
    const GraphPolyline P = completed_graph(a), Q = completed_graph(b);
    double hi = 0.0;
    for (const auto& u : P.vertices)
        for (const auto& v : Q.vertices)
            hi = std::max(hi, std::max(norm2_diff(u.value, v.value), std::fabs(u.time - v.time)));
    double lo = 0.0;
    if (frechet_within(P, Q, lo)) return 0.0;
    while (hi - lo > opts.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (frechet_within(P, Q, mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

double m1_distance_weak(const StepPath& x, const StepPath& y, double T, const MetricOptions& opts) {
    require_same_dim(x, y);
    double worst = 0.0;
    for (std::size_t k = 0; k < x.dim(); ++k) {
        auto component = [k](const StepPath& p) {
            std::vector<Vec> vals;
            vals.reserve(p.segments());
            for (const Vec& v : p.values()) vals.push_back({v[k]});
            return StepPath(1, p.horizon(), p.breakpoints(), std::move(vals));
        };
        worst = std::max(worst, m1_distance(component(x), component(y), T, opts));
    }
    return worst;
}

double halfline_distance(const StepPath& x, const StepPath& y, const MetricOptions& opts) {
    require_same_dim(x, y);
    const double t_max = opts.t_max;
    if (!(t_max > 0.0) || opts.quadrature < 2) fail(ErrorCode::BadParameter, "bad quadrature options");

    std::vector<double> grid;
    grid.reserve(opts.quadrature + 16);
    for (std::size_t k = 0; k <= opts.quadrature; ++k)
        grid.push_back(t_max * static_cast<double>(k) / static_cast<double>(opts.quadrature));
    for (double b : merged_breakpoints(x, y)) {
        if (b <= 0.0 || b >= t_max) continue;
        grid.push_back(b - 1e-9);
        grid.push_back(b + 1e-9);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // keep sample points off breakpoint times
    for (double& t : grid) {
        const StepPath* paths[2] = {&x, &y};
        for (const StepPath* p : paths) {
            const auto& bp = p->breakpoints();
            auto it = std::lower_bound(bp.begin(), bp.end(), t);
            if (it != bp.end() && *it == t && t > 0.0) t = std::nextafter(t, 0.0);
        }
    }
    grid.erase(std::remove_if(grid.begin(), grid.end(), [](double t) { return t <= 0.0; }), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto integrand = [&](double T) {
        const StepPath a = x.horizon() >= T ? x.restrict(T) : x.extend(T);
        const StepPath b = y.horizon() >= T ? y.restrict(T) : y.extend(T);
        double d = 0.0;
        switch (opts.base) {
            case BaseMetric::Uniform: d = uniform_distance(a, b, T); break;
            case BaseMetric::J1: d = j1_distance(a, b, T, opts); break;
            case BaseMetric::M1: d = m1_distance(a, b, T, opts); break;
        }
        return std::exp(-T) * std::min(d, 1.0);
    };

    double total = 0.0;
    double prev_t = 0.0;
    double prev_f = integrand(std::min(grid.front(), 1e-9)); // T -> 0 limit of the integrand
    for (double t : grid) {
        const double f = integrand(t);
        total += 0.5 * (f + prev_f) * (t - prev_t);
        prev_t = t;
        prev_f = f;
    }
    return total; // tail past t_max is below e^{-t_max}
}

} // namespace skolab
