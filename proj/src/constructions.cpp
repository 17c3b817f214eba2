#include "skolab/constructions.hpp"

#include <cmath>
#include <limits>

#include "skolab/integrals.hpp"

namespace skolab {

using nlohmann::json;

const StepPath& PathBundle::primary() const {
    if (x) return *x;
    if (h) return *h;
    fail(ErrorCode::MissingInternals, "bundle has no path");
}

const StepPath& PathBundle::on(const std::string& target) const {
    if (target == "x" || target.empty()) {
        if (x) return *x;
    } else if (target == "h") {
        if (h) return *h;
    } else if (target == "m") {
        if (martingale) return *martingale;
    } else if (target == "a") {
        if (finite_variation) return *finite_variation;
    } else if (target == "count") {
        if (count) return *count;
    } else {
        fail(ErrorCode::BadParameter, "unknown bundle target: " + target);
    }
    fail(ErrorCode::MissingInternals, "bundle lacks target " + target);
}

namespace {

CtrwConfig ctrw_config_from(const json& params, std::size_t n) {
    CtrwConfig cfg;
    cfg.alpha = params.value("alpha", 1.5);
    if (params.contains("beta") && !params.at("beta").is_null())
        cfg.beta = params.at("beta").get<double>();
    if (params.contains("coeffs")) cfg.coeffs = params.at("coeffs").get<std::vector<double>>();
    cfg.coupled = params.value("coupled", false);
    cfg.scale_n = n;
    cfg.horizon = params.value("T", 1.0);
    cfg.innovations = InnovationModel::parse(params.value("innovation", "pareto_rademacher(1.5,1)"));
    cfg.wait_x_min = params.value("wait_x_min", 1.0);
    return cfg;
}

PathBundle make_deterministic(const std::string& id, std::size_t n) {
    DeterministicExample ex = deterministic_example(id, n);
    PathBundle b;
    b.h = std::move(ex.h);
    b.x = std::move(ex.x);
    b.h_limit = std::move(ex.h_limit);
    b.x_limit = std::move(ex.x_limit);
    return b;
}

} // namespace

PathBundle make_construction(const std::string& id, const json& params, std::size_t n, Seed seed) {
    if (id == "constant") {
        PathBundle b;
        const double T = params.value("T", 1.0);
        const double c = params.value("value", 0.0);
        b.x = StepPath::constant(1, T, {c});
        b.h = b.x;
        b.x_limit = b.x;
        b.h_limit = b.h;
        return b;
    }
    if (id == "alternating" || id == "sawtooth" || id == "zigzag" || id == "fig6")
        return make_deterministic(id, n);
    if (id == "split_jump_pair") {
        // half-jump-then-jump indicators with disjoint limit discontinuities
        const double nd = static_cast<double>(n);
        PathBundle b;
        b.h = StepPath(1, 2.0, {0.0, 1.0 - 1.0 / nd, 1.0}, {{0.0}, {0.5}, {1.0}});
        b.x = StepPath(1, 2.0, {0.0, 1.5 + 1.0 / nd}, {{0.0}, {1.0}});
        b.h_limit = StepPath::indicator(2.0, 1.0);
        b.x_limit = StepPath::indicator(2.0, 1.5);
        return b;
    }
    if (id == "moving_average") {
        CtrwConfig cfg = ctrw_config_from(params, n);
        cfg.beta.reset();
        PathBundle b;
        b.x = moving_average_path(cfg, seed);
        return b;
    }
    if (id == "ctrw" || id == "ctrw_gd" || id == "delayed_readout") {
        CtrwConfig cfg = ctrw_config_from(params, n);
        CtrwPath ct = ctrw_path(cfg, seed);
        PathBundle b;
        b.epochs = ct.epochs;
        b.count = std::move(ct.count);
        if (id == "ctrw_gd") {
            GoodDecomposition gd = ctrw_decompose(cfg, ct);
            b.scalars["drift_per_step"] = gd.drift_per_step;
            // A = large + drift as one finite-variation path
            std::vector<double> bp = gd.large.breakpoints();
            std::vector<Vec> av(bp.size());
            for (std::size_t i = 0; i < bp.size(); ++i)
                av[i] = {gd.large.values()[i][0] + gd.drift.values()[i][0]};
            b.finite_variation = StepPath(1, gd.large.horizon(), std::move(bp), std::move(av));
            b.martingale = std::move(gd.martingale);
        }
        if (id == "delayed_readout") {
            const std::size_t delay = params.value("delay", std::size_t{0});
            const std::string fn = params.value("readout", "identity");
            const std::size_t grid = params.value("readout_grid", std::size_t{32});
            std::vector<double> times;
            for (std::size_t i = 0; i < grid; ++i)
                times.push_back(cfg.horizon * static_cast<double>(i) / static_cast<double>(grid));
            b.h = delayed_readout_integrand(ct, times, readout_by_name(fn), delay);
        }
        b.x = std::move(ct.path);
        return b;
    }
    if (id == "exploding_pair") {
        ExplodingPair ep = exploding_pair(n, params.value("alpha", 1.5), params.value("epsilon", 0.25),
                                          params.value("x_min", 1.0), params.value("T", 1.0), seed);
        PathBundle b;
        b.scalars["amplitude"] = ep.amplitude;
        b.h = std::move(ep.h);
        b.x = std::move(ep.x);
        return b;
    }
    if (id == "crossing_walk") {
        const bool build_x = params.value("build_x", n <= 200000);
        CrossingWalk cw = crossing_pair(n, params.value("T", 1.0), seed, build_x);
        PathBundle b;
        b.h = std::move(cw.h);
        if (cw.x) b.x = std::move(cw.x);
        b.scalars["r"] = static_cast<double>(cw.r);
        b.scalars["integral_tail"] = static_cast<double>(cw.integral_units) * cw.unit;
        b.scalars["identity_gap"] =
            static_cast<double>(cw.integral_units - cw.rhs_units); // 0 iff the display holds
        b.scalars["sup_x"] = static_cast<double>(cw.max_abs_walk) * cw.unit;
        b.scalars["cap"] = cw.cap;
        return b;
    }
    if (id == "single_jump_martingale") {
        const double T = params.value("T", 1.0);
        const double eps = params.value("eps", 0.25);
        PathBundle b;
        if (params.value("build_path", true)) {
            SingleJumpMartingale mj = single_jump_martingale(
                static_cast<int>(n), T, eps, seed, params.value("grid_density", std::size_t{2}));
            b.scalars["tau"] = mj.tau;
            b.scalars["m_at_half_T"] = mj.value_at(T / 2.0);
            b.scalars["m_at_T"] = mj.value_at(T);
            b.x = std::move(mj.path);
        } else {
            const double tau = single_jump_tau(T, eps, seed);
            const double psi_tau = single_jump_psi(static_cast<int>(n), T, eps, tau);
            auto value_at = [&](double t) {
                double v = -single_jump_lambda(static_cast<int>(n), T, std::min(t, tau)) / T;
                if (tau <= t) v += psi_tau;
                return v;
            };
            b.scalars["tau"] = tau;
            b.scalars["m_at_half_T"] = value_at(T / 2.0);
            b.scalars["m_at_T"] = value_at(T);
        }
        return b;
    }
    if (id == "inverse_subordinator") {
        InverseSubordinator is = inverse_subordinator_path(
            params.value("beta", 0.8), n, params.value("T", 1.0), seed, params.value("wait_x_min", 1.0));
        PathBundle b;
        b.epochs = std::move(is.epochs);
        b.x = std::move(is.path);
        return b;
    }
    fail(ErrorCode::UnknownConstruction, "unknown construction: " + id);
}

std::vector<std::string> construction_ids() {
    return {"constant",       "alternating",  "sawtooth",
            "zigzag",         "fig6",         "split_jump_pair",
            "moving_average", "ctrw",         "ctrw_gd",
            "delayed_readout", "exploding_pair", "crossing_walk",
            "single_jump_martingale", "inverse_subordinator"};
}

std::string construction_registry_table() {
    return "construction            params (defaults)                                   outputs\n"
           "constant                T=1, value=0                                        x\n"
           "alternating             -                                                   x (+ limit)\n"
           "sawtooth                -                                                   h, x (+ limits)\n"
           "zigzag                  -                                                   h, x (+ limit)\n"
           "fig6                    -                                                   h, x (+ limits)\n"
           "split_jump_pair         -                                                   h, x (+ limits)\n"
           "moving_average          alpha=1.5, coeffs=[1], innovation, T=1              x\n"
           "ctrw                    alpha, beta, coeffs, coupled, innovation, T         x, count, epochs\n"
           "ctrw_gd                 as ctrw (uncorrelated)                              x, m, a, epochs\n"
           "delayed_readout         as ctrw + delay=0, readout=identity, readout_grid   h, x, epochs\n"
           "exploding_pair          alpha=1.5, epsilon=0.25, x_min=1, T=1               h, x\n"
           "crossing_walk           T=1, build_x                                        h, x, scalars\n"
           "single_jump_martingale  T=1, eps=0.25, grid_density=2                       x, scalars\n"
           "inverse_subordinator    beta=0.8, T=1, wait_x_min=1                         x, epochs\n";
}

} // namespace skolab
