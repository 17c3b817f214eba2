#include "doctest.h"

#include <cmath>

#include "skolab/graph.hpp"
#include "skolab/path_io.hpp"
#include "skolab/processes.hpp"
#include "skolab/rng.hpp"
#include "skolab/step_path.hpp"

using namespace skolab;

namespace {

StepPath random_path(RngStream& rng, std::size_t dim, double horizon, std::size_t max_breaks) {
    const std::size_t k = 1 + rng.next_u64() % max_breaks;
    std::vector<double> bp{0.0};
    for (std::size_t i = 1; i < k; ++i) bp.push_back(horizon * rng.uniform_open());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<Vec> vals;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        Vec v(dim);
        for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
        vals.push_back(std::move(v));
    }
    return StepPath(dim, horizon, std::move(bp), std::move(vals));
}

} // namespace

TEST_CASE("construction and validation") {
    StepPath ind(1, 2.0, {0.0, 1.0}, {{0.0}, {1.0}});
    CHECK(ind.dim() == 1);
    CHECK(ind.evaluate1(1.5) == 1.0);

    StepPath c(1, 2.0, {0.0}, {{5.0}});
    CHECK(c.evaluate1(1.7) == 5.0);

    CHECK_THROWS_AS(StepPath(1, 1.0, {0.0, 0.5, 0.25}, {{0.0}, {1.0}, {2.0}}), Error);
    try {
        StepPath bad(1, 1.0, {0.1, 0.5}, {{0.0}, {1.0}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonMonotoneTimes);
    }
    CHECK_THROWS_AS(StepPath(1, 1.0, {0.0, 0.5}, {{0.0}}), Error);
    CHECK_THROWS_AS(StepPath(2, 1.0, {0.0}, {{0.0}}), Error);
    CHECK_THROWS_AS(StepPath(1, 1.0, {0.0, 2.0}, {{0.0}, {1.0}}), Error);
    CHECK_THROWS_AS(StepPath(1, 1.0, {0.0}, {{std::nan("")}}), Error);
}

TEST_CASE("evaluate sides") {
    StepPath ind = StepPath::indicator(2.0, 1.0);
    CHECK(ind.evaluate1(1.0, Side::Left) == 0.0);
    CHECK(ind.evaluate1(1.0, Side::Right) == 1.0);
    CHECK(ind.evaluate1(0.0, Side::Left) == 0.0); // x(0-) = x(0)
    CHECK(ind.evaluate1(2.0) == 1.0);
    CHECK_THROWS_AS(ind.evaluate(2.5), Error);

    // off breakpoints, both sides agree
    RngStream rng(Seed{11, 0, 0});
    for (int rep = 0; rep < 50; ++rep) {
        const StepPath p = random_path(rng, 2, 1.0, 12);
        for (int i = 0; i < 20; ++i) {
            double t = rng.uniform01();
            const auto& bp = p.breakpoints();
            if (std::find(bp.begin(), bp.end(), t) != bp.end()) continue;
            CHECK(p.evaluate(t, Side::Left) == p.evaluate(t, Side::Right));
        }
    }
}

TEST_CASE("jumps") {
    CHECK(StepPath::indicator(2.0, 1.0).jumps().size() == 1);
    CHECK(StepPath::constant(1, 2.0, {3.0}).jumps().empty());

    // alternating walk, n = 2 on [0, 1]: four jumps of size 1/2 at k/4
    const auto ex = deterministic_example("alternating", 2);
    const auto js = ex.x.jumps();
    REQUIRE(js.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(js[k].first == (k + 1) / 4.0);
        CHECK(std::fabs(js[k].second[0]) == 0.5);
    }

    // zero-size breakpoints excluded from jumps but kept by the path
    StepPath z(1, 1.0, {0.0, 0.5}, {{1.0}, {1.0}});
    CHECK(z.jumps().empty());
    CHECK(z.segments() == 2);
    CHECK(z.normalized().segments() == 1);
}

TEST_CASE("total variation") {
    // brute-force oracle: sum of |value steps| inside the window
    auto oracle = [](const StepPath& p, double a, double b) {
        double tv = 0.0;
        for (std::size_t i = 1; i < p.segments(); ++i)
            if (p.breakpoints()[i] > a && p.breakpoints()[i] <= b)
                tv += std::fabs(p.values()[i][0] - p.values()[i - 1][0]);
        return tv;
    };
    const auto alt = deterministic_example("alternating", 4);
    CHECK(alt.x.total_variation_sum(0.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(alt.x.total_variation_sum(0.0, 1.0) == oracle(alt.x, 0.0, 1.0));

    const auto saw = deterministic_example("sawtooth", 16);
    CHECK(saw.x.total_variation_sum(0.0, 1.0) == doctest::Approx(16.0).epsilon(1e-13));

    CHECK(StepPath::constant(1, 1.0, {7.0}).total_variation_sum(0.0, 1.0) == 0.0);

    // TV >= |x(T) - x(0)| coordinatewise
    RngStream rng(Seed{12, 0, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const StepPath p = random_path(rng, 2, 1.0, 15);
        const Vec tv = p.total_variation(0.0, 1.0);
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(tv[k] >= std::fabs(p.evaluate(1.0)[k] - p.evaluate(0.0)[k]) - 1e-12);
    }
}

TEST_CASE("jump truncation") {
    StepPath p(1, 2.0, {0.0, 1.0, 1.5}, {{0.0}, {0.5}, {2.5}});
    const StepPath jd = truncate_jumps(p, 1.0);
    const auto js = jd.jumps();
    REQUIRE(js.size() == 1);
    CHECK(js[0].first == 1.5);
    CHECK(js[0].second[0] == doctest::Approx(1.0));

    CHECK(truncate_jumps(p, 10.0).jumps().empty());
    CHECK(truncate_jumps(p, std::numeric_limits<double>::infinity()).jumps().empty());

    RngStream rng(Seed{13, 0, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const StepPath x = random_path(rng, 2, 1.0, 15);
        const double delta = 0.1 + rng.uniform01();
        const StepPath small = remove_large_jumps(x, delta);
        for (const auto& [t, d] : small.jumps()) CHECK(norm2(d) <= delta * (1 + 1e-12));
        // jumps of J_delta happen only where x itself jumps by more than delta
        for (const auto& [t, d] : truncate_jumps(x, delta).jumps()) {
            const Vec dx = x.evaluate(t);
            const Vec dl = x.evaluate(t, Side::Left);
            CHECK(norm2_diff(dx, dl) > delta);
        }
    }
}

TEST_CASE("completed graph") {
    const GraphPolyline g = completed_graph(StepPath::indicator(2.0, 1.0));
    REQUIRE(g.size() == 4);
    CHECK(g.vertices[0].value[0] == 0.0);
    CHECK(g.vertices[0].time == 0.0);
    CHECK(g.vertices[1].value[0] == 0.0);
    CHECK(g.vertices[1].time == 1.0);
    CHECK(g.vertices[2].value[0] == 1.0);
    CHECK(g.vertices[2].time == 1.0);
    CHECK(g.vertices[3].value[0] == 1.0);
    CHECK(g.vertices[3].time == 2.0);

    const GraphPolyline gc = completed_graph(StepPath::constant(1, 3.0, {5.0}));
    REQUIRE(gc.size() == 2);
    CHECK(gc.vertices[1].time == 3.0);

    // zigzag pair as an R^2 path visits the (0, 1) value corner
    const auto z = deterministic_example("zigzag", 4);
    const GraphPolyline g2 = completed_graph(amalgamate(*z.h, z.x));
    bool corner = false;
    for (const auto& v : g2.vertices)
        if (v.value[0] == 0.0 && v.value[1] == 1.0) corner = true;
    CHECK(corner);
    // consecutive vertices share a coordinate (time or full value)
    for (std::size_t i = 1; i < g2.size(); ++i) {
        const bool same_time = g2.vertices[i].time == g2.vertices[i - 1].time;
        const bool same_value = g2.vertices[i].value == g2.vertices[i - 1].value;
        CHECK((same_time || same_value));
    }
}

TEST_CASE("parametric representation") {
    const ParamRep rep = param_rep(StepPath::constant(1, 2.0, {3.0}), 2);
    REQUIRE(rep.size() == 2);
    CHECK(rep.r[0] == 0.0);
    CHECK(rep.r[1] == 2.0);
    CHECK(rep.u[0][0] == 3.0);

    const ParamRep rep2 = param_rep(StepPath::indicator(2.0, 1.0), 4);
    bool left = false, right = false;
    for (std::size_t j = 0; j < rep2.size(); ++j) {
        if (rep2.u[j][0] == 0.0 && rep2.r[j] == 1.0) left = true;
        if (rep2.u[j][0] == 1.0 && rep2.r[j] == 1.0) right = true;
    }
    CHECK(left);
    CHECK(right);
    CHECK_THROWS_AS(param_rep(StepPath::indicator(2.0, 1.0), 3), Error);

    // every vertex of the 8-tooth polyline appears among the samples
    const auto saw = deterministic_example("sawtooth", 4);
    const GraphPolyline g = completed_graph(saw.x);
    const ParamRep rep3 = param_rep(saw.x, 64);
    for (const auto& v : g.vertices) {
        bool found = false;
        for (std::size_t j = 0; j < rep3.size(); ++j)
            if (rep3.u[j] == v.value && rep3.r[j] == v.time) found = true;
        CHECK(found);
    }

    // samples lie on the graph, r nondecreasing, grid strictly increasing
    RngStream rng(Seed{14, 0, 0});
    for (int rep_i = 0; rep_i < 30; ++rep_i) {
        const StepPath p = random_path(rng, 2, 1.0, 10);
        const GraphPolyline gp = completed_graph(p);
        const ParamRep r = param_rep(p, gp.size() + 17);
        for (std::size_t j = 0; j < r.size(); ++j) {
            CHECK(on_graph(gp, r.u[j], r.r[j], 1e-9));
            if (j > 0) {
                CHECK(r.r[j] >= r.r[j - 1]);
                CHECK(r.grid[j] > r.grid[j - 1]);
            }
        }
    }
}

TEST_CASE("json round trip is bit exact") {
    RngStream rng(Seed{15, 0, 0});
    for (int rep = 0; rep < 50; ++rep) {
        const StepPath p = random_path(rng, 1 + rng.next_u64() % 3, 1.0 + rng.uniform01(), 12);
        const StepPath q = path_from_json(path_to_json(p));
        CHECK(p.same_bits(q));
        // serialized form round-trips byte for byte as well
        CHECK(path_to_json(p).dump() == path_to_json(q).dump());
    }
}

TEST_CASE("csv round trip") {
    StepPath p(2, 2.0, {0.0, 0.5, 1.25}, {{0.0, 1.0}, {2.0, -1.0}, {0.25, 0.125}});
    const StepPath q = path_from_csv(path_to_csv(p));
    CHECK(p.same_bits(q));
    // a path whose last breakpoint equals the horizon
    StepPath r(1, 1.0, {0.0, 1.0}, {{0.0}, {4.0}});
    CHECK(r.same_bits(path_from_csv(path_to_csv(r))));
}

TEST_CASE("amalgamation and restriction") {
    StepPath a = StepPath::indicator(2.0, 0.5);
    StepPath b = StepPath::indicator(2.0, 1.5, -2.0);
    const StepPath ab = amalgamate(a, b);
    CHECK(ab.dim() == 2);
    CHECK(ab.evaluate(1.0) == Vec{1.0, 0.0});
    CHECK(ab.evaluate(1.75) == Vec{1.0, -2.0});

    const StepPath ra = a.restrict(1.0);
    CHECK(ra.horizon() == 1.0);
    CHECK(ra.evaluate1(1.0) == 1.0);
    const StepPath ea = a.extend(5.0);
    CHECK(ea.evaluate1(4.0) == 1.0);
}
