#include "skolab/integrals.hpp"

#include <algorithm>
#include <cmath>

namespace skolab {

Partition Partition::uniform(double horizon, std::size_t cells) {
    if (cells == 0) fail(ErrorCode::BadParameter, "need at least one cell");
    Partition p;
    for (std::size_t k = 0; k <= cells; ++k)
        p.times.push_back(horizon * static_cast<double>(k) / static_cast<double>(cells));
    return p;
}

void Partition::validate(double horizon) const {
    if (times.empty() || times.front() != 0.0)
        fail(ErrorCode::BadParameter, "partition must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) fail(ErrorCode::BadParameter, "partition not increasing");
    if (times.back() > horizon) fail(ErrorCode::BadParameter, "partition past horizon");
}

namespace {

void require_integrable(const StepPath& h, const StepPath& z) {
    if (h.dim() != z.dim() && h.dim() != 1)
        fail(ErrorCode::DimensionMismatch, "integrand must match integrator dim or be scalar");
    require_same_horizon(h, z);
}

} // namespace

StepPath simple_integral(const StepPath& h, const StepPath& z) {
    require_integrable(h, z);
    std::vector<double> bp{0.0};
    std::vector<Vec> vals{Vec(z.dim(), 0.0)};
    for (const auto& [t, dz] : z.jumps()) {
        const Vec hv = h.evaluate(t, Side::Left);
        Vec next = vals.back();
        for (std::size_t k = 0; k < dz.size(); ++k)
            next[k] += (h.dim() == 1 ? hv[0] : hv[k]) * dz[k];
        bp.push_back(t);
        vals.push_back(std::move(next));
    }
    return StepPath(z.dim(), z.horizon(), std::move(bp), std::move(vals));
}

Vec simple_integral_at(const StepPath& h, const StepPath& z, double t) {
    require_integrable(h, z);
    if (t < 0.0 || t > z.horizon()) fail(ErrorCode::OutOfHorizon, "time outside horizon");
    Vec acc(z.dim(), 0.0);
    for (const auto& [s, dz] : z.jumps()) {
        if (s > t) break;
        const Vec hv = h.evaluate(s, Side::Left);
        for (std::size_t k = 0; k < dz.size(); ++k)
            acc[k] += (h.dim() == 1 ? hv[0] : hv[k]) * dz[k];
    }
    return acc;
}

double simple_integral_dot(const StepPath& h, const StepPath& z, double t) {
    const Vec v = simple_integral_at(h, z, t);
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

StepPath quad_covariation(const StepPath& x, const StepPath& y) {
    if (x.dim() != y.dim()) fail(ErrorCode::DimensionMismatch, "paths must share dimension");
    require_same_horizon(x, y);
    std::vector<double> bp{0.0};
    std::vector<Vec> vals{Vec(x.dim(), 0.0)};
    const auto jx = x.jumps();
    const auto jy = y.jumps();
    std::size_t i = 0, j = 0;
    while (i < jx.size() && j < jy.size()) {
        if (jx[i].first < jy[j].first) ++i;
        else if (jy[j].first < jx[i].first) ++j;
        else {
            Vec next = vals.back();
            for (std::size_t k = 0; k < next.size(); ++k) next[k] += jx[i].second[k] * jy[j].second[k];
            bp.push_back(jx[i].first);
            vals.push_back(std::move(next));
            ++i;
            ++j;
        }
    }
    return StepPath(x.dim(), x.horizon(), std::move(bp), std::move(vals));
}

StepPath discretize_grid(const StepPath& x, const Partition& grid) {
    grid.validate(x.horizon());
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (double t : grid.times) {
        bp.push_back(t);
        vals.push_back(x.evaluate(t));
    }
    return StepPath(x.dim(), x.horizon(), std::move(bp), std::move(vals));
}

Partition adaptive_partition(const StepPath& x, const Partition& grid, double epsilon) {
    grid.validate(x.horizon());
    if (!(epsilon > 0.0)) fail(ErrorCode::BadParameter, "epsilon must be positive");
    std::vector<double> times = grid.times;
    const auto& bp = x.breakpoints();
    std::vector<double> cells = grid.times;
    if (cells.back() < x.horizon()) cells.push_back(x.horizon());
    for (std::size_t k = 1; k < cells.size(); ++k) {
        const double cell_start = cells[k - 1];
        const double cell_end = cells[k];
        Vec anchor = x.evaluate(cell_start);
        auto it = std::upper_bound(bp.begin(), bp.end(), cell_start);
        for (; it != bp.end() && *it < cell_end; ++it) {
            const Vec& v = x.values()[static_cast<std::size_t>(it - bp.begin())];
            if (norm2_diff(v, anchor) >= epsilon) {
                times.push_back(*it);
                anchor = v;
            }
        }
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    Partition out;
    out.times = std::move(times);
    out.kind = PartitionKind::Adaptive;
    return out;
}

namespace {

// Exact sup over [0, T] of |a - b|; both inputs come from simple_integral,
// so dimensions and horizons already agree.
double sup_diff(const StepPath& a, const StepPath& b, double T) {
    double best = 0.0;
    for (double t : merged_breakpoints(a, b)) {
        if (t > T) break;
        best = std::max(best, norm2_diff(a.values()[a.segment_index(t)], b.values()[b.segment_index(t)]));
    }
    return best;
}

} // namespace

double discretization_gap(const StepPath& h, const StepPath& x, const Partition& grid,
                          double epsilon, double T) {
    require_integrable(h, x);
    const StepPath coarse = simple_integral(discretize_grid(h, grid), x);
    const StepPath fine = simple_integral(discretize_grid(h, adaptive_partition(h, grid, epsilon)), x);
    return sup_diff(coarse, fine, T);
}

ParamRep integral_param_rep(const ParamRep& rep, const std::vector<double>& h_jump_times,
                            double horizon) {
    const std::size_t N = rep.size();
    if (N < 2) fail(ErrorCode::InvalidRep, "representation too small");
    if (rep.u[0].size() % 2 != 0) fail(ErrorCode::InvalidRep, "need an amalgamated (h, z) representation");
    const std::size_t d = rep.u[0].size() / 2;

    // Simple-path times 0 = t_1 < ... < t_{k+1} = horizon.
    std::vector<double> times{0.0};
    for (double t : h_jump_times) {
        if (t <= 0.0 || t >= horizon) continue;
        times.push_back(t);
    }
    times.push_back(horizon);

    // zbar_i = sup{z : r(z) = t_i}, zhat_i = inf{z : r(z) = t_i} (grid indices).
    const std::size_t k = times.size() - 1;
    std::vector<std::size_t> zbar(k + 1), zhat(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        const double t = times[i];
        std::size_t first = N, last = N;
        for (std::size_t j = 0; j < N; ++j) {
            if (rep.r[j] == t) {
                if (first == N) first = j;
                last = j;
            }
        }
        if (first == N) fail(ErrorCode::InvalidRep, "representation misses a jump time of h");
        zhat[i] = first;
        zbar[i] = last;
    }

    ParamRep out;
    out.grid = rep.grid;
    out.r = rep.r;
    out.u.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        Vec w(3 * d);
        for (std::size_t c = 0; c < 2 * d; ++c) w[c] = rep.u[j][c];
        for (std::size_t c = 0; c < d; ++c) {
            double acc = 0.0;
            for (std::size_t i = 1; i <= k; ++i) {
                const double weight = rep.u[zhat[i]][c]; // u1 at the first parameter reaching t_i
                const std::size_t cap_hi = std::min(j, zbar[i]);
                const std::size_t cap_lo = std::min(j, zbar[i - 1]);
                acc += weight * (rep.u[cap_hi][d + c] - rep.u[cap_lo][d + c]);
            }
            w[2 * d + c] = acc;
        }
        out.u[j] = std::move(w);
    }
    return out;
}

} // namespace skolab
