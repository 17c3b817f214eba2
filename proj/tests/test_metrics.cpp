#include "doctest.h"

#include <cmath>

#include "skolab/graph.hpp"
#include "skolab/metrics.hpp"
#include "skolab/processes.hpp"
#include "test_util.hpp"

using namespace skolab;
using testutil::random_path;

namespace {

// Discrete Frechet distance on densely resampled polylines under the
// max(value, time) ground metric; an independent oracle for d_M1 on step
// paths, accurate to the sampling density.
double discrete_frechet_oracle(const StepPath& x, const StepPath& y, double T, std::size_t samples) {
    const ParamRep px = param_rep(x.restrict(T).normalized(), samples);
    const ParamRep py = param_rep(y.restrict(T).normalized(), samples);
    const std::size_t n = px.size(), m = py.size();
    auto ground = [&](std::size_t i, std::size_t j) {
        return std::max(norm2_diff(px.u[i], py.u[j]), std::fabs(px.r[i] - py.r[j]));
    };
    std::vector<double> prev(m), curr(m);
    prev[0] = ground(0, 0);
    for (std::size_t j = 1; j < m; ++j) prev[j] = std::max(prev[j - 1], ground(0, j));
    for (std::size_t i = 1; i < n; ++i) {
        curr[0] = std::max(prev[0], ground(i, 0));
        for (std::size_t j = 1; j < m; ++j)
            curr[j] = std::max(std::min({prev[j - 1], prev[j], curr[j - 1]}), ground(i, j));
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

double polyline_length(const StepPath& p, double T) {
    const GraphPolyline g = completed_graph(p.restrict(T));
    double len = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i)
        len += std::hypot(norm2_diff(g.vertices[i].value, g.vertices[i - 1].value),
                          g.vertices[i].time - g.vertices[i - 1].time);
    return len;
}

// Exhaustive oracle for w': tries every sequence of cut slots (exact breakpoint
// cuts and interior-of-segment cuts) with earliest feasible positions, over the
// candidate oscillation levels.
struct WPrimeOracle {
    std::vector<double> start, end;
    std::vector<double> value; // 1-d
    double T = 0.0, theta = 0.0;

    explicit WPrimeOracle(const StepPath& x, double theta_, double T_) : T(T_), theta(theta_) {
        for (std::size_t i = 0; i < x.segments(); ++i) {
            if (x.breakpoints()[i] >= T) break;
            start.push_back(x.breakpoints()[i]);
            end.push_back(i + 1 < x.segments() ? std::min(x.breakpoints()[i + 1], T) : T);
            value.push_back(x.values()[i][0]);
        }
    }

    double osc(std::size_t a, std::size_t b) const {
        double lo = value[a], hi = value[a];
        for (std::size_t i = a; i <= b; ++i) {
            lo = std::min(lo, value[i]);
            hi = std::max(hi, value[i]);
        }
        return hi - lo;
    }

    bool feasible_from(std::size_t a, double pos, double gamma) const {
        if (osc(a, value.size() - 1) <= gamma && T - pos >= theta) return true;
        for (std::size_t b = a; b < value.size(); ++b) {
            if (osc(a, b) > gamma) break;
            if (b + 1 < value.size() && start[b + 1] >= pos + theta &&
                feasible_from(b + 1, start[b + 1], gamma))
                return true;
            const double p = std::max(start[b], pos + theta);
            if (p <= end[b] && p > pos && feasible_from(b, p, gamma)) return true;
        }
        return false;
    }

    double solve() const {
        std::vector<double> candidates{0.0};
        for (std::size_t i = 0; i < value.size(); ++i)
            for (std::size_t j = i + 1; j < value.size(); ++j)
                candidates.push_back(std::fabs(value[i] - value[j]));
        std::sort(candidates.begin(), candidates.end());
        for (double g : candidates)
            if (feasible_from(0, 0.0, g)) return g;
        return candidates.back();
    }
};

// Direct triple enumeration over the merged event grid for w_hat.
double what_oracle(const StepPath& h, const StepPath& x, double delta, double T) {
    std::vector<std::pair<double, Side>> events;
    std::vector<double> times;
    for (double t : merged_breakpoints(h, x)) {
        if (t > T) break;
        times.push_back(t);
    }
    if (times.back() != T) times.push_back(T);
    for (double t : times) {
        if (t > 0.0) events.push_back({t, Side::Left});
        events.push_back({t, Side::Right});
    }
    auto ok = [&](std::size_t s, std::size_t u) {
        const double gap = events[u].first - events[s].first;
        if (gap < delta) return true;
        if (gap > delta) return false;
        return !(events[s].second == Side::Left && events[u].second == Side::Right);
    };
    double best = 0.0;
    for (std::size_t s = 0; s < events.size(); ++s)
        for (std::size_t t = s + 1; t < events.size(); ++t)
            for (std::size_t u = t + 1; u < events.size(); ++u) {
                if (!ok(s, u)) continue;
                for (std::size_t k = 0; k < h.dim(); ++k) {
                    const double A = std::fabs(h.evaluate(events[s].first, events[s].second)[k] -
                                               h.evaluate(events[t].first, events[t].second)[k]);
                    const double B = std::fabs(x.evaluate(events[t].first, events[t].second)[k] -
                                               x.evaluate(events[u].first, events[u].second)[k]);
                    best = std::max(best, std::min(A, B));
                }
            }
    return best;
}

// Chain DP oracle for the increment counter (1-d).
std::size_t ndelta_oracle(const StepPath& x, double delta, double T) {
    std::vector<double> v;
    for (std::size_t i = 0; i < x.segments(); ++i) {
        if (x.breakpoints()[i] > T) break;
        v.push_back(x.values()[i][0]);
    }
    const std::size_t K = v.size();
    std::vector<std::size_t> best_upto(K, 0);
    for (std::size_t e = 0; e < K; ++e) {
        std::size_t b = e == 0 ? 0 : best_upto[e - 1];
        for (std::size_t s = 0; s <= e; ++s)
            if (std::fabs(v[e] - v[s]) >= delta) {
                const std::size_t before = best_upto[s]; // reuse of the endpoint is allowed
                b = std::max(b, before + 1);
            }
        best_upto[e] = std::max(b, e == 0 ? std::size_t{0} : best_upto[e - 1]);
    }
    return K == 0 ? 0 : best_upto[K - 1];
}

} // namespace

TEST_CASE("uniform distance") {
    const StepPath ind = StepPath::indicator(2.0, 1.0);
    CHECK(uniform_distance(ind, StepPath::zero(1, 2.0), 2.0) == 1.0);
    CHECK(uniform_distance(ind, ind, 2.0) == 0.0);
    const auto f = deterministic_example("fig6", 4);
    CHECK(uniform_distance(*f.h, *f.h_limit, 2.0) == 0.25); // sup attained on [1 - 2/n, 1)
}

TEST_CASE("j1 exact values") {
    const StepPath a = StepPath::indicator(2.0, 1.0);
    const StepPath b = StepPath::indicator(2.0, 1.1);
    CHECK(j1_distance(a, b, 2.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(j1_distance(a, a, 2.0) == 0.0);
    const StepPath half = StepPath::indicator(2.0, 1.0, 0.5);
    CHECK(j1_distance(a, half, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

    MetricOptions ub;
    ub.mode = MetricMode::UpperBound;
    ub.tolerance = 1e-4;
    CHECK(j1_distance(a, b, 2.0, ub) >= 0.1 - 1e-15);
    CHECK(j1_distance(a, b, 2.0, ub) <= 0.1 + 1e-4);

    // a jump pinned at the horizon cannot be moved
    const StepPath at_T(1, 1.0, {0.0, 1.0}, {{0.0}, {1.0}});
    const StepPath before(1, 1.0, {0.0, 0.9}, {{0.0}, {1.0}});
    CHECK(j1_distance(at_T, before, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("m1 values and certificates") {
    const auto z = deterministic_example("zigzag", 8);
    const StepPath limit = *z.h_limit;
    MetricOptions opts;
    CHECK(m1_distance(limit, limit, 2.0, opts) == 0.0);
    for (std::size_t n : {4, 16, 64}) {
        const auto zn = deterministic_example("zigzag", n);
        CHECK(m1_distance(*zn.h, limit, 2.0, opts) <= 1.0 / static_cast<double>(n) + 2e-6);
    }
    const StepPath pair_n = amalgamate(*z.h, z.x);
    const StepPath pair_lim = amalgamate(limit, limit);
    CHECK(!m1_within(pair_n, pair_lim, 2.0, 0.5));
    CHECK(m1_distance(pair_n, pair_lim, 2.0, opts) >= 0.5);
}

TEST_CASE("metric ordering, symmetry, triangle on random paths") {
    RngStream rng(Seed{21, 0, 0});
    MetricOptions opts;
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t dim = 1 + rng.next_u64() % 2;
        const StepPath x = random_path(rng, dim, 1.0, 10);
        const StepPath y = random_path(rng, dim, 1.0, 10);
        const StepPath z = random_path(rng, dim, 1.0, 10);
        const double du = uniform_distance(x, y, 1.0);
        const double dj = j1_distance(x, y, 1.0);
        const double dm = m1_distance(x, y, 1.0, opts);
        CHECK(dj <= du);
        CHECK(dm <= dj + 1e-6);
        CHECK(j1_distance(y, x, 1.0) == dj);
        CHECK(m1_distance(y, x, 1.0, opts) == dm);
        CHECK(j1_distance(x, z, 1.0) <= j1_distance(x, y, 1.0) + j1_distance(y, z, 1.0) + 1e-12);
        CHECK(m1_distance(x, z, 1.0, opts) <=
              m1_distance(x, y, 1.0, opts) + m1_distance(y, z, 1.0, opts) + 3e-6);
        CHECK(m1_distance(x, x, 1.0, opts) == 0.0);
        CHECK(j1_distance(x, x, 1.0) == 0.0);
    }
}

TEST_CASE("m1 against a discrete frechet oracle") {
    RngStream rng(Seed{22, 0, 0});
    MetricOptions opts;
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t dim = 1 + rng.next_u64() % 2;
        const StepPath x = random_path(rng, dim, 1.0, 8);
        const StepPath y = random_path(rng, dim, 1.0, 8);
        const double dm = m1_distance(x, y, 1.0, opts);
        const std::size_t samples = 500;
        const double oracle = discrete_frechet_oracle(x, y, 1.0, samples);
        const double slack = (polyline_length(x, 1.0) + polyline_length(y, 1.0)) /
                                 static_cast<double>(samples) +
                             opts.tolerance;
        CHECK(dm <= oracle + opts.tolerance); // discrete >= continuous
        CHECK(dm >= oracle - slack);
    }
}

TEST_CASE("j1 exact equals grid upper bound on random pairs") {
    RngStream rng(Seed{23, 0, 0});
    MetricOptions ub;
    ub.mode = MetricMode::UpperBound;
    ub.tolerance = 1e-4;
    for (int rep = 0; rep < 25; ++rep) {
        const StepPath x = random_path(rng, 1, 1.0, 8);
        const StepPath y = random_path(rng, 1, 1.0, 8);
        const double exact = j1_distance(x, y, 1.0);
        const double upper = j1_distance(x, y, 1.0, ub);
        CHECK(upper >= exact - 1e-13);
        CHECK(upper <= exact + 1e-4);
    }
}

TEST_CASE("halfline metric") {
    MetricOptions opts;
    const StepPath zero = StepPath::zero(1, 1.0);
    const StepPath one = StepPath::constant(1, 1.0, {1.0});
    CHECK(halfline_distance(zero, one, opts) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(halfline_distance(zero, zero, opts) == 0.0);
    const StepPath late = StepPath::indicator(1.0, std::log(2.0));
    CHECK(halfline_distance(zero, late, opts) == doctest::Approx(0.5).epsilon(4e-3));
}

TEST_CASE("w_prime") {
    CHECK(w_prime(StepPath::constant(1, 1.0, {2.0}), 0.25, 1.0) == 0.0);
    const auto alt = deterministic_example("alternating", 2);
    CHECK(w_prime(alt.x, 0.125, 1.0) == 0.0); // jump grid 1/4 >= theta

    RngStream rng(Seed{24, 0, 0});
    for (int rep = 0; rep < 40; ++rep) {
        const StepPath x = random_path(rng, 1, 1.0, 7);
        const double theta = 0.05 + 0.4 * rng.uniform01();
        WPrimeOracle oracle(x, theta, 1.0);
        CHECK(w_prime(x, theta, 1.0) == doctest::Approx(oracle.solve()).epsilon(1e-9));
    }
}

TEST_CASE("w_dprime") {
    CHECK(w_dprime(StepPath::constant(1, 1.0, {2.0}), 0.25, 1.0) == 0.0);
    // up-then-down spike within the window is picked up at full height
    StepPath spike(1, 1.0, {0.0, 0.5, 0.52}, {{0.0}, {1.0}, {0.0}});
    CHECK(w_dprime(spike, 0.1, 1.0) == doctest::Approx(1.0));
    // monotone path: the middle term vanishes; only endpoint windows remain
    StepPath mono(1, 1.0, {0.0, 0.3, 0.6}, {{0.0}, {1.0}, {2.0}});
    CHECK(w_dprime(mono, 0.05, 1.0) == 0.0);
    StepPath mono_edge(1, 1.0, {0.0, 0.03, 0.5}, {{0.0}, {1.0}, {2.0}});
    CHECK(w_dprime(mono_edge, 0.05, 1.0) == 1.0); // jump inside [0, theta]
}

TEST_CASE("consecutive increment functional") {
    const StepPath c = StepPath::constant(1, 2.0, {4.0});
    const auto f8 = deterministic_example("fig6", 8);
    CHECK(consecutive_increment(c, f8.x, 0.25, 2.0) == 0.0);
    CHECK(consecutive_increment(*f8.h, f8.x, 0.25, 2.0) == 0.25);
    CHECK(consecutive_increment(*f8.h, f8.x, 0.25, 2.0) == what_oracle(*f8.h, f8.x, 0.25, 2.0));

    const StepPath h = StepPath::indicator(2.0, 0.2);
    const StepPath x = StepPath::indicator(2.0, 1.7);
    CHECK(consecutive_increment(h, x, 0.5, 2.0) == 0.0);

    RngStream rng(Seed{25, 0, 0});
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t dim = 1 + rng.next_u64() % 2;
        const StepPath a = random_path(rng, dim, 1.0, 6);
        const StepPath b = random_path(rng, dim, 1.0, 6);
        const double delta = 0.05 + 0.5 * rng.uniform01();
        CHECK(consecutive_increment(a, b, delta, 1.0) ==
              doctest::Approx(what_oracle(a, b, delta, 1.0)).epsilon(1e-12));
        CHECK(consecutive_increment(a, b, delta, 1.0) <=
              consecutive_increment(a, b, delta * 1.5, 1.0) + 1e-15);
        CHECK(consecutive_increment(a, b, delta, 0.6) <=
              consecutive_increment(a, b, delta, 1.0) + 1e-15);
    }
}

TEST_CASE("increment counter") {
    CHECK(increment_count(StepPath::indicator(2.0, 1.0), 0.5, 2.0) == 1);
    CHECK(increment_count(StepPath::constant(1, 2.0, {1.0}), 0.5, 2.0) == 0);
    const auto alt = deterministic_example("alternating", 2);
    CHECK(increment_count(alt.x, 0.5, 1.0) == 4);

    RngStream rng(Seed{26, 0, 0});
    for (int rep = 0; rep < 60; ++rep) {
        const StepPath x = random_path(rng, 1, 1.0, 12);
        const double delta = 0.1 + 0.8 * rng.uniform01();
        CHECK(increment_count(x, delta, 1.0) == ndelta_oracle(x, delta, 1.0));
    }
}

TEST_CASE("uniform convergence dominates j1 and m1") {
    MetricOptions opts;
    const StepPath x = StepPath::indicator(2.0, 1.0);
    for (std::size_t n : {10, 100, 1000}) {
        StepPath xn(1, 2.0, {0.0, 1.0}, {{1.0 / static_cast<double>(n)}, {1.0}});
        const double du = uniform_distance(xn, x, 2.0);
        CHECK(j1_distance(xn, x, 2.0) <= du);
        CHECK(m1_distance(xn, x, 2.0, opts) <= du + 1e-6);
    }
}

TEST_CASE("increment counts stay bounded along M1-convergent families") {
    // bounded sup norm and vanishing w'' keep the delta-increment counts flat
    for (std::size_t n : {4, 16, 64, 256}) {
        const auto z = deterministic_example("zigzag", n);
        CHECK(increment_count(*z.h, 0.3, 2.0) <= 2);
        CHECK(increment_count(z.x, 0.3, 2.0) <= 1);
    }
}

TEST_CASE("weak m1 is coordinatewise") {
    const auto z4 = deterministic_example("zigzag", 4);
    const StepPath pair_n = amalgamate(*z4.h, z4.x);
    const StepPath pair_lim = amalgamate(*z4.h_limit, *z4.x_limit);
    MetricOptions opts;
    CHECK(m1_distance_weak(pair_n, pair_lim, 2.0, opts) <= 0.5 + 2e-6);
    CHECK(m1_distance(pair_n, pair_lim, 2.0, opts) >= 0.5);
}
