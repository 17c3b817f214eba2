#include "skolab/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>

namespace skolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SparseTable {
    std::vector<std::vector<double>> mx, mn;

    explicit SparseTable(const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::size_t levels = 1;
        while ((std::size_t{1} << levels) <= n) ++levels;
        mx.assign(levels, {});
        mn.assign(levels, {});
        mx[0] = v;
        mn[0] = v;
        for (std::size_t k = 1; k < levels; ++k) {
            const std::size_t len = std::size_t{1} << k;
            if (n + 1 < len) break;
            mx[k].resize(n - len + 1);
            mn[k].resize(n - len + 1);
            for (std::size_t i = 0; i + len <= n; ++i) {
                mx[k][i] = std::max(mx[k - 1][i], mx[k - 1][i + len / 2]);
                mn[k][i] = std::min(mn[k - 1][i], mn[k - 1][i + len / 2]);
            }
        }
    }

    double range_max(std::size_t l, std::size_t r) const { // inclusive
        const std::size_t k = std::bit_width(r - l + 1) - 1;
        return std::max(mx[k][l], mx[k][r + 1 - (std::size_t{1} << k)]);
    }
    double range_min(std::size_t l, std::size_t r) const {
        const std::size_t k = std::bit_width(r - l + 1) - 1;
        return std::min(mn[k][l], mn[k][r + 1 - (std::size_t{1} << k)]);
    }
};

struct Segments {
    std::vector<double> start, end; // [start, end) except a possible point at T
    std::vector<Vec> value;
    std::size_t size() const { return start.size(); }
};

// Segment windows of the path restricted to [0, T]; a breakpoint exactly at T
// keeps its value as a degenerate point segment (attained at T only).
Segments segments_upto(const StepPath& x, double T) {
    Segments s;
    const auto& bp = x.breakpoints();
    const auto& vals = x.values();
    for (std::size_t i = 0; i < bp.size() && bp[i] <= T; ++i) {
        s.start.push_back(bp[i]);
        s.end.push_back(i + 1 < bp.size() ? std::min(bp[i + 1], T) : T);
        s.value.push_back(vals[i]);
    }
    return s;
}

double osc_pair(const Vec& a, const Vec& b) { return norm2_diff(a, b); }

// lo[b] = smallest a with oscillation of values a..b at most gamma.
std::vector<std::size_t> osc_window_starts(const Segments& seg, double gamma, std::size_t dim) {
    const std::size_t K = seg.size();
    std::vector<std::size_t> lo(K, 0);
    if (dim == 1) {
        std::deque<std::size_t> qmax, qmin;
        std::size_t a = 0;
        for (std::size_t b = 0; b < K; ++b) {
            const double v = seg.value[b][0];
            while (!qmax.empty() && seg.value[qmax.back()][0] <= v) qmax.pop_back();
            qmax.push_back(b);
            while (!qmin.empty() && seg.value[qmin.back()][0] >= v) qmin.pop_back();
            qmin.push_back(b);
            while (seg.value[qmax.front()][0] - seg.value[qmin.front()][0] > gamma) {
                ++a;
                if (qmax.front() < a) qmax.pop_front();
                if (qmin.front() < a) qmin.pop_front();
            }
            lo[b] = a;
        }
    } else {
        // limit[a] = largest b with osc(a..b) <= gamma, monotone in a.
        std::vector<std::size_t> limit(K);
        for (std::size_t a = 0; a < K; ++a) {
            std::size_t b = a;
            double osc = 0.0;
            while (b + 1 < K) {
                double grow = osc;
                for (std::size_t i = a; i <= b; ++i)
                    grow = std::max(grow, osc_pair(seg.value[i], seg.value[b + 1]));
                if (grow > gamma) break;
                osc = grow;
                ++b;
            }
            limit[a] = b;
        }
        std::size_t a = 0;
        for (std::size_t b = 0; b < K; ++b) {
            while (limit[a] < b) ++a;
            lo[b] = a;
        }
    }
    return lo;
}

// Feasibility of a theta-sparse partition with all cell oscillations <= gamma.
// Cuts are either exactly at a segment start (clean split) or interior to a
// segment (that segment's value lands in both cells); positions are tracked
// through the earliest feasible cut per slot, which is exact because later
// cells only benefit from earlier cut positions.
bool w_prime_feasible(const Segments& seg, double theta, double T, double gamma, std::size_t dim) {
    const std::size_t K = seg.size();
    if (K == 0) return true;
    const std::vector<std::size_t> lo = osc_window_starts(seg, gamma, dim);

    std::vector<double> minpos(K, kInf); // earliest cut position with right cell starting at segment a
    std::deque<std::size_t> window;      // increasing minpos over a sliding a-window
    auto push = [&](std::size_t a) {
        while (!window.empty() && minpos[window.back()] >= minpos[a]) window.pop_back();
        window.push_back(a);
    };
    auto window_min = [&](std::size_t from, std::size_t upto) -> double {
        while (!window.empty() && window.front() < from) window.pop_front();
        if (window.empty() || window.front() > upto) return kInf;
        return minpos[window.front()];
    };

    // a = 0 doubles as the virtual start (position 0, no cut yet).
    minpos[0] = 0.0;
    push(0);
    for (std::size_t j = 1; j < K; ++j) {
        // clean cut at seg.start[j]: previous cell covers a..j-1
        double pos_a = kInf;
        const double prev = window_min(lo[j - 1], j - 1);
        if (prev + theta <= seg.start[j]) pos_a = seg.start[j];
        // interior cut inside segment j: previous cell covers a..j
        double pos_b = kInf;
        const double prev_b = std::min(window_min(lo[j], j - 1), pos_a);
        if (prev_b < kInf) {
            const double p = std::max(seg.start[j], prev_b + theta);
            if (p <= seg.end[j]) pos_b = p;
        }
        minpos[j] = std::min(pos_a, pos_b);
        push(j);
    }
    const double last = window_min(lo[K - 1], K - 1);
    return last <= T - theta;
}

double global_osc(const Segments& seg, std::size_t dim) {
    double m = 0.0;
    if (dim == 1) {
        double lo = seg.value[0][0], hi = lo;
        for (const Vec& v : seg.value) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        m = hi - lo;
    } else {
        for (std::size_t i = 0; i < seg.size(); ++i)
            for (std::size_t j = i + 1; j < seg.size(); ++j)
                m = std::max(m, osc_pair(seg.value[i], seg.value[j]));
    }
    return m;
}

} // namespace

double w_prime(const StepPath& x, double theta, double T) {
    if (!(theta > 0.0) || theta > T) fail(ErrorCode::BadParameter, "need 0 < theta <= T");
    if (T > x.horizon()) fail(ErrorCode::HorizonExceeded, "T past horizon");
    Segments seg = segments_upto(x, T);
    // w' looks at half-open cells [t_{i-1}, t_i), so a value sitting only at
    // the closed endpoint T is invisible to it.
    while (seg.size() > 1 && seg.start.back() >= T) {
        seg.start.pop_back();
        seg.end.pop_back();
        seg.value.pop_back();
    }
    const std::size_t dim = x.dim();
    if (w_prime_feasible(seg, theta, T, 0.0, dim)) return 0.0;
    double lo = 0.0, hi = global_osc(seg, dim);
    for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (w_prime_feasible(seg, theta, T, mid, dim)) hi = mid;
        else lo = mid;
    }
    return hi;
}

namespace {

double dist_point_chord(const Vec& v, const Vec& a, const Vec& b) {
    // distance from v to the segment [a, b]
    double bb = 0.0, dot = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = b[k] - a[k];
        bb += d * d;
        dot += (v[k] - a[k]) * d;
    }
    double t = bb > 0.0 ? std::clamp(dot / bb, 0.0, 1.0) : 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = v[k] - (a[k] + t * (b[k] - a[k]));
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

double w_dprime(const StepPath& x, double theta, double T) {
    if (!(theta > 0.0) || theta > T) fail(ErrorCode::BadParameter, "need 0 < theta <= T");
    if (T > x.horizon()) fail(ErrorCode::HorizonExceeded, "T past horizon");
    const Segments seg = segments_upto(x, T);
    const std::size_t K = seg.size();
    const std::size_t dim = x.dim();

    // Middle term: triples in segments i < j < l whose time span fits in a
    // 2*theta window, i.e. seg.start[l] - seg.end[i] < 2*theta.
    double vtilde = 0.0;
    if (K >= 3) {
        if (dim == 1) {
            std::vector<double> flat(K);
            for (std::size_t i = 0; i < K; ++i) flat[i] = seg.value[i][0];
            SparseTable st(flat);
            for (std::size_t j = 1; j + 1 < K; ++j) {
                const double vj = flat[j];
                std::size_t imin = 0;
                for (std::size_t l = j + 1; l < K && seg.start[l] < seg.end[j - 1] + 2.0 * theta; ++l) {
                    while (seg.end[imin] <= seg.start[l] - 2.0 * theta) ++imin;
                    if (imin > j - 1) continue;
                    const double top = std::max(flat[l], st.range_min(imin, j - 1));
                    const double bot = std::min(flat[l], st.range_max(imin, j - 1));
                    vtilde = std::max(vtilde, std::max(vj - top, bot - vj));
                }
            }
        } else {
            for (std::size_t i = 0; i + 2 < K; ++i)
                for (std::size_t l = i + 2; l < K && seg.start[l] < seg.end[i] + 2.0 * theta; ++l)
                    for (std::size_t j = i + 1; j < l; ++j)
                        vtilde = std::max(vtilde, dist_point_chord(seg.value[j], seg.value[i], seg.value[l]));
        }
    }

    // Endpoint oscillations over [0, theta] and [T - theta, T].
    auto window_osc = [&](double from, double to, bool closed_left) {
        double m = 0.0;
        std::vector<const Vec*> vals;
        for (std::size_t i = 0; i < K; ++i) {
            const bool intersects = closed_left ? (seg.end[i] > from || seg.start[i] >= from)
                                                : seg.start[i] <= to;
            if (!intersects || seg.start[i] > to) continue;
            vals.push_back(&seg.value[i]);
        }
        if (dim == 1) {
            double lo = kInf, hi = -kInf;
            for (const Vec* v : vals) {
                lo = std::min(lo, (*v)[0]);
                hi = std::max(hi, (*v)[0]);
            }
            m = vals.empty() ? 0.0 : hi - lo;
        } else {
            for (std::size_t i = 0; i < vals.size(); ++i)
                for (std::size_t j = i + 1; j < vals.size(); ++j)
                    m = std::max(m, osc_pair(*vals[i], *vals[j]));
        }
        return m;
    };
    const double vbar0 = window_osc(0.0, theta, false);
    const double vbarT = window_osc(T - theta, T, true);

    return std::max({vtilde, vbar0, vbarT});
}

// ---------------------------------------------------------------------------
// Consecutive-increment functional. The sup over real triples s < t < u is
// attained on the merged breakpoint grid with both one-sided values: between
// breakpoints both paths are constant, so each of s, t, u can be slid to a
// breakpoint (or its left limit) without changing the two increments, only
// relaxing or preserving the window constraint.
// ---------------------------------------------------------------------------
namespace {

struct EventGrid {
    std::vector<double> pos;
    std::vector<bool> is_left; // left-limit side of a breakpoint
};

EventGrid build_events(const StepPath& a, const StepPath& b, double T) {
    std::vector<double> times;
    for (double t : merged_breakpoints(a, b)) {
        if (t > T) break;
        times.push_back(t);
    }
    if (times.back() != T) times.push_back(T);
    EventGrid ev;
    for (double t : times) {
        if (t > 0.0) {
            ev.pos.push_back(t);
            ev.is_left.push_back(true);
        }
        ev.pos.push_back(t);
        ev.is_left.push_back(false);
    }
    return ev;
}

} // namespace

double consecutive_increment(const StepPath& h, const StepPath& x, double delta, double T) {
    require_same_dim(h, x);
    if (!(delta > 0.0)) fail(ErrorCode::BadParameter, "delta must be positive");
    if (T > h.horizon() || T > x.horizon()) fail(ErrorCode::HorizonExceeded, "T past a horizon");

    const EventGrid ev = build_events(h, x, T);
    const std::size_t E = ev.pos.size();
    if (E < 3) return 0.0;

    auto window_ok = [&](std::size_t s, std::size_t u) {
        const double gap = ev.pos[u] - ev.pos[s];
        if (gap < delta) return true;
        if (gap > delta) return false;
        return !(ev.is_left[s] && !ev.is_left[u]);
    };
    // u_max[s]: last event index pairable with s; nondecreasing in s.
    std::vector<std::size_t> u_max(E);
    {
        std::size_t u = 0;
        for (std::size_t s = 0; s < E; ++s) {
            if (u < s) u = s;
            while (u + 1 < E && window_ok(s, u + 1)) ++u;
            u_max[s] = u;
        }
    }

    double best = 0.0;
    for (std::size_t k = 0; k < h.dim(); ++k) {
        std::vector<double> hv(E), xv(E);
        for (std::size_t e = 0; e < E; ++e) {
            const Side side = ev.is_left[e] ? Side::Left : Side::Right;
            hv[e] = h.evaluate(ev.pos[e], side)[k];
            xv[e] = x.evaluate(ev.pos[e], side)[k];
        }
        SparseTable st(xv);
        for (std::size_t t = 1; t + 1 < E; ++t) {
            for (std::size_t s = t; s-- > 0;) {
                if (u_max[s] <= t) break;
                const double A = std::fabs(hv[s] - hv[t]);
                if (A <= best) continue;
                const double xmax = st.range_max(t + 1, u_max[s]);
                const double xmin = st.range_min(t + 1, u_max[s]);
                const double B = std::max(xmax - xv[t], xv[t] - xmin);
                best = std::max(best, std::min(A, B));
            }
        }
    }
    return best;
}

std::size_t increment_count(const StepPath& x, double delta, double T) {
    if (!(delta > 0.0)) fail(ErrorCode::BadParameter, "delta must be positive");
    if (T > x.horizon()) fail(ErrorCode::HorizonExceeded, "T past horizon");
    const Segments seg = segments_upto(x, T);
    std::size_t count = 0;
    if (x.dim() == 1) {
        double wmin = seg.value[0][0], wmax = wmin;
        for (std::size_t i = 1; i < seg.size(); ++i) {
            const double v = seg.value[i][0];
            wmin = std::min(wmin, v);
            wmax = std::max(wmax, v);
            if (wmax - wmin >= delta) {
                ++count;
                wmin = wmax = v;
            }
        }
    } else {
        std::vector<const Vec*> window{&seg.value[0]};
        for (std::size_t i = 1; i < seg.size(); ++i) {
            const Vec& v = seg.value[i];
            bool trigger = false;
            for (const Vec* w : window)
                if (osc_pair(*w, v) >= delta) {
                    trigger = true;
                    break;
                }
            if (trigger) {
                ++count;
                window.clear();
            }
            window.push_back(&v);
        }
    }
    return count;
}

} // namespace skolab
