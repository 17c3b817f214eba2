#include "skolab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skolab {

void CtrwConfig::validate() const {
    if (!(alpha > 0.0) || alpha > 2.0) fail(ErrorCode::BadParameter, "alpha must be in (0, 2]");
    if (beta && (!(*beta > 0.0) || !(*beta < 1.0)))
        fail(ErrorCode::BadParameter, "beta must be in (0, 1)");
    if (coeffs.empty() || !(coeffs[0] > 0.0)) fail(ErrorCode::BadParameter, "c_0 must be positive");
    for (double c : coeffs)
        if (c < 0.0 || !std::isfinite(c)) fail(ErrorCode::BadParameter, "coefficients must be finite and nonnegative");
    if (scale_n == 0) fail(ErrorCode::BadParameter, "scale_n must be at least 1");
    if (!(horizon > 0.0)) fail(ErrorCode::BadParameter, "horizon must be positive");
    if (coupled) {
        if (!beta) fail(ErrorCode::BadParameter, "coupled waits need a waiting index");
        if (coeffs.size() > 1) fail(ErrorCode::BadParameter, "coupled CTRWs must be uncorrelated");
    }
    innovations.validate();
    if (!(wait_x_min > 0.0)) fail(ErrorCode::BadParameter, "wait_x_min must be positive");
}

namespace {

// zeta_k = sum_j c_j theta_{k-j}; theta drawn once for indices 1-J .. m.
std::vector<double> linear_process(const CtrwConfig& config, const std::vector<double>& theta,
                                   std::size_t m) {
    const std::size_t J = config.coeffs.size() - 1;
    std::vector<double> zeta(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
        double z = 0.0;
        for (std::size_t j = 0; j <= J; ++j) z += config.coeffs[j] * theta[k - j + J - 1];
        zeta[k] = z;
    }
    return zeta;
}

std::vector<double> draw_theta(const CtrwConfig& config, std::size_t m, Seed seed) {
    const std::size_t J = config.coeffs.size() - 1;
    RngStream rng(Seed{seed.master, seed.replica, StreamInnovations});
    std::vector<double> theta(m + J);
    for (double& t : theta) t = sample_innovation(config.innovations, rng);
    return theta;
}

} // namespace

StepPath moving_average_path(const CtrwConfig& config, Seed seed) {
    config.validate();
    const std::size_t n = config.scale_n;
    const std::size_t m = static_cast<std::size_t>(std::floor(
        static_cast<double>(n) * config.horizon));
    const std::vector<double> theta = draw_theta(config, m, seed);
    const std::vector<double> zeta = linear_process(config, theta, m);
    const double scale = std::pow(static_cast<double>(n), -1.0 / config.alpha);

    std::vector<double> bp(m + 1);
    std::vector<Vec> vals(m + 1);
    double acc = 0.0;
    bp[0] = 0.0;
    vals[0] = {0.0};
    for (std::size_t k = 1; k <= m; ++k) {
        acc += scale * zeta[k];
        bp[k] = static_cast<double>(k) / static_cast<double>(n);
        vals[k] = {acc};
    }
    if (bp.back() > config.horizon) {
        bp.pop_back();
        vals.pop_back();
    }
    return StepPath(1, config.horizon, std::move(bp), std::move(vals));
}

CtrwPath ctrw_path(const CtrwConfig& config, Seed seed) {
    config.validate();
    const std::size_t n = config.scale_n;
    const double nT = static_cast<double>(n) * config.horizon;
    const double beta = config.beta ? *config.beta : 1.0;
    const double jump_scale = std::pow(static_cast<double>(n), -beta / config.alpha);

    std::vector<double> epochs; // L_k / n, while <= horizon
    std::vector<double> theta;
    std::vector<double> sizes;

    if (!config.beta) {
        // Deterministic unit waits: the CTRW degenerates to the moving average grid.
        const std::size_t m = static_cast<std::size_t>(std::floor(nT));
        theta = draw_theta(config, m, seed);
        const std::vector<double> zeta = linear_process(config, theta, m);
        for (std::size_t k = 1; k <= m; ++k) {
            epochs.push_back(static_cast<double>(k) / static_cast<double>(n));
            sizes.push_back(jump_scale * zeta[k]);
        }
    } else if (config.coupled) {
        RngStream waits(Seed{seed.master, seed.replica, StreamWaits});
        RngStream signs(Seed{seed.master, seed.replica, StreamSigns});
        double L = 0.0;
        while (true) {
            const double u = waits.uniform01();
            const double J = config.wait_x_min * std::pow(1.0 - u, -1.0 / beta);
            L += J;
            if (L > nT) break;
            const double magnitude = std::pow(J, beta / config.alpha);
            const double t = signs.coin() ? magnitude : -magnitude;
            theta.push_back(t);
            epochs.push_back(L / static_cast<double>(n));
            sizes.push_back(jump_scale * config.coeffs[0] * t);
        }
    } else {
        RngStream waits(Seed{seed.master, seed.replica, StreamWaits});
        std::vector<double> raw_epochs;
        double L = 0.0;
        while (true) {
            L += config.wait_x_min * std::pow(1.0 - waits.uniform01(), -1.0 / beta);
            if (L > nT) break;
            raw_epochs.push_back(L / static_cast<double>(n));
        }
        const std::size_t m = raw_epochs.size();
        theta = draw_theta(config, m, seed);
        const std::vector<double> zeta = linear_process(config, theta, m);
        for (std::size_t k = 1; k <= m; ++k) {
            epochs.push_back(raw_epochs[k - 1]);
            sizes.push_back(jump_scale * zeta[k]);
        }
        theta.erase(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(config.coeffs.size() - 1));
    }

    std::vector<double> bp{0.0};
    std::vector<Vec> vals{{0.0}};
    std::vector<double> cbp{0.0};
    std::vector<Vec> cvals{{0.0}};
    double acc = 0.0;
    for (std::size_t k = 0; k < epochs.size(); ++k) {
        acc += sizes[k];
        bp.push_back(epochs[k]);
        vals.push_back({acc});
        cbp.push_back(epochs[k]);
        cvals.push_back({static_cast<double>(k + 1)});
    }
    CtrwPath out{
        StepPath(1, config.horizon, std::move(bp), std::move(vals)),
        StepPath(1, config.horizon, std::move(cbp), std::move(cvals)),
        std::move(epochs),
        std::move(sizes),
        std::move(theta),
    };
    return out;
}

namespace {

// Nudge m so that ((m + l) + d) == x bit-exactly; the adjustment is at most a
// few ulps and keeps the decomposition an honest residual.
double exact_residual(double x, double l, double d) {
    double m = x - l - d;
    const double inf = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8; ++it) {
        const double err = x - ((m + l) + d);
        if (err == 0.0) return m;
        const double next = m + err;
        m = next == m ? std::nextafter(m, err > 0.0 ? inf : -inf) : next;
    }
    for (int it = 0; it < 64; ++it) {
        const double err = x - ((m + l) + d);
        if (err == 0.0) return m;
        m = std::nextafter(m, err > 0.0 ? inf : -inf);
    }
    return m;
}

} // namespace

GoodDecomposition ctrw_decompose(const CtrwConfig& config, const CtrwPath& ctrw) {
    config.validate();
    for (std::size_t j = 1; j < config.coeffs.size(); ++j)
        if (config.coeffs[j] != 0.0)
            fail(ErrorCode::NotUncorrelated, "decomposition needs an uncorrelated CTRW");

    const double beta = config.beta ? *config.beta : 1.0;
    const double s = config.coeffs[0] * std::pow(static_cast<double>(config.scale_n), -beta / config.alpha);
    double drift_step = 0.0;
    if (config.coupled) {
        // Coupled link: |zeta| = wait^{beta/alpha} is Pareto(alpha, x_min^{beta/alpha}),
        // symmetrized by an independent sign, so the truncated mean vanishes.
        drift_step = 0.0;
    } else {
        drift_step = s * truncated_mean(config.innovations, 1.0 / s);
    }

    const std::size_t m = ctrw.epochs.size();
    std::vector<double> bp{0.0};
    bp.insert(bp.end(), ctrw.epochs.begin(), ctrw.epochs.end());
    std::vector<Vec> mv(m + 1), lv(m + 1), dv(m + 1);
    mv[0] = {0.0};
    lv[0] = {0.0};
    dv[0] = {0.0};
    double large_acc = 0.0, drift_acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double jump = ctrw.jump_sizes[k];
        if (std::fabs(jump) > 1.0) large_acc += jump;
        drift_acc += drift_step;
        const double x_val = ctrw.path.values()[k + 1][0];
        lv[k + 1] = {large_acc};
        dv[k + 1] = {drift_acc};
        mv[k + 1] = {exact_residual(x_val, large_acc, drift_acc)};
    }
    GoodDecomposition out{
        StepPath(1, ctrw.path.horizon(), bp, std::move(mv)),
        StepPath(1, ctrw.path.horizon(), bp, std::move(lv)),
        StepPath(1, ctrw.path.horizon(), std::move(bp), std::move(dv)),
        drift_step,
    };
    return out;
}

// --- single-jump martingale ---------------------------------------------------

namespace {

double f_oscillator(double t) {
    if (t == 0.0) return 0.0;
    const double inv = 1.0 / t;
    return inv * std::cos(inv) - std::sin(inv);
}

double g_window(int n, double T, double t) {
    const double nd = static_cast<double>(n);
    const double lo = T + 1.0 / nd - 1.0 / std::sqrt(nd);
    if (t < lo || t >= T) return 0.0;
    return T + 1.0 / nd - t;
}

} // namespace

double single_jump_lambda(int n, double T, double t) {
    const double g = g_window(n, T, t);
    if (g == 0.0) return 0.0;
    return g * std::sin(1.0 / g);
}

double single_jump_psi(int n, double T, double eps, double t) {
    const double g = g_window(n, T, t);
    if (g == 0.0) return 0.0;
    const double tail = (1.0 - eps) * (T - t) / T + eps; // P((t, T])
    return f_oscillator(g) * tail / (1.0 - eps);
}

std::vector<double> single_jump_grid(int n, double T, std::size_t extra_per_period) {
    const double nd = static_cast<double>(n);
    const double lo = T + 1.0 / nd - 1.0 / std::sqrt(nd);
    if (!(lo > 0.0)) fail(ErrorCode::BadParameter, "window start must be positive; raise T or n");
    std::vector<double> grid{0.0, 0.5 * lo, lo};
    // 1/g runs from sqrt(n) up to n across the window; place samples at every
    // multiple of pi / (extra + 1) of the phase so each oscillation is resolved.
    const double phase_step = std::numbers::pi / static_cast<double>(extra_per_period + 1);
    const double inv_lo = std::sqrt(nd), inv_hi = nd;
    for (double phase = std::ceil(inv_lo / phase_step) * phase_step; phase <= inv_hi;
         phase += phase_step) {
        grid.push_back(T + 1.0 / nd - 1.0 / phase); // g(t) = 1/phase
    }
    grid.push_back(T);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.erase(std::remove_if(grid.begin(), grid.end(), [&](double t) { return t < 0.0 || t > T; }),
               grid.end());
    return grid;
}

StepPath single_jump_compensator(int n, double T, std::size_t extra_per_period) {
    const std::vector<double> grid = single_jump_grid(n, T, extra_per_period);
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (double t : grid) {
        bp.push_back(t);
        vals.push_back({single_jump_lambda(n, T, t)});
    }
    return StepPath(1, T, std::move(bp), std::move(vals));
}

double single_jump_tau(double T, double eps, Seed seed) {
    RngStream rng(Seed{seed.master, seed.replica, StreamJumpTime});
    return rng.uniform01() < eps ? T : T * rng.uniform01();
}

double SingleJumpMartingale::value_at(double t) const {
    double v = -single_jump_lambda(n, T, std::min(t, tau)) / T;
    if (tau <= t) v += psi_tau;
    return v;
}

SingleJumpMartingale single_jump_martingale(int n, double T, double eps, Seed seed,
                                            std::size_t extra_per_period) {
    if (n < 4) fail(ErrorCode::BadParameter, "need n >= 4");
    if (!(eps > 0.0) || !(eps < 1.0)) fail(ErrorCode::BadParameter, "eps must be in (0, 1)");
    if (!(T > 0.0)) fail(ErrorCode::BadParameter, "T must be positive");

    SingleJumpMartingale out;
    out.n = n;
    out.T = T;
    out.eps = eps;
    out.tau = single_jump_tau(T, eps, seed);
    out.psi_tau = single_jump_psi(n, T, eps, out.tau);

    std::vector<double> grid = single_jump_grid(n, T, extra_per_period);
    if (out.tau < T) grid.push_back(out.tau);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (double t : grid) {
        bp.push_back(t);
        vals.push_back({out.value_at(t)});
    }
    out.path = StepPath(1, T, std::move(bp), std::move(vals));
    return out;
}

// --- exploding pair -----------------------------------------------------------

ExplodingPair exploding_pair(std::size_t n, double alpha, double epsilon, double x_min,
                             double T, Seed seed) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) fail(ErrorCode::BadParameter, "need 1 < alpha < 2");
    if (!(epsilon > 0.0) || !(1.0 / alpha + epsilon < 1.0))
        fail(ErrorCode::BadParameter, "need eps > 0 with 1/alpha + eps < 1");
    if (!(x_min > 0.0)) fail(ErrorCode::BadParameter, "x_min must be positive");
    if (n < 2 || !(T > 0.0)) fail(ErrorCode::BadParameter, "need n >= 2 and T > 0");

    const std::size_t m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * T));
    RngStream mags(Seed{seed.master, seed.replica, StreamInnovations});
    RngStream signs(Seed{seed.master, seed.replica, StreamSigns});
    std::vector<double> z(m + 1);
    for (double& v : z) {
        const double w = x_min * std::pow(1.0 - mags.uniform01(), -1.0 / alpha);
        v = signs.coin() ? w : -w;
    }

    const double nd = static_cast<double>(n);
    const double amp = std::pow(nd, -epsilon);
    const double scale = std::pow(nd, -1.0 / alpha);
    const double c0 = 1.0, c1 = 1.0;

    std::vector<double> hbp{0.0};
    std::vector<Vec> hvals{{0.0}};
    std::vector<double> xbp{0.0};
    std::vector<Vec> xvals{{0.0}};
    // The integrand flips to +n^{-eps} sgn(Z_k) at sign changes so that each
    // flip step feeds -n^{-eps} |Z_k| into the lagged difference part of the
    // integrator and the integrals blow up towards +infinity.
    double h_prev = 0.0, x_acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        double h_next = h_prev;
        if (k >= 2 && std::signbit(z[k]) != std::signbit(z[k - 1])) {
            const double sgn_prev = std::signbit(z[k - 1]) ? -1.0 : 1.0;
            if (h_prev == amp * sgn_prev) h_next = 0.0;
            else if (h_prev == 0.0) h_next = std::signbit(z[k]) ? -amp : amp;
        }
        const double t = static_cast<double>(k) / nd;
        if (h_next != h_prev) {
            hbp.push_back(t);
            hvals.push_back({h_next});
            h_prev = h_next;
        }
        x_acc += scale * (c0 * z[k] + c1 * z[k - 1]);
        xbp.push_back(t);
        xvals.push_back({x_acc});
    }
    if (xbp.back() > T) {
        xbp.pop_back();
        xvals.pop_back();
    }
    ExplodingPair out{
        StepPath(1, T, std::move(hbp), std::move(hvals)),
        StepPath(1, T, std::move(xbp), std::move(xvals)),
        std::move(z),
        amp,
    };
    return out;
}

// --- crossing walk --------------------------------------------------------------

CrossingWalk crossing_pair(std::size_t n, double T, Seed seed, bool build_x) {
    if (n < 16) fail(ErrorCode::BadParameter, "need n >= 16");
    const double nd = static_cast<double>(n);
    const double cap = 2.0 * std::pow(nd, -0.25);
    const double unit = 1.0 / std::sqrt(nd);
    if (T < cap) fail(ErrorCode::BadParameter, "horizon must reach the crossing cap 2 n^{-1/4}");
    const std::size_t m = static_cast<std::size_t>(std::floor(nd * T));

    RngStream rng(Seed{seed.master, seed.replica, StreamInnovations});

    CrossingWalk out;
    out.cap = cap;
    out.unit = unit;

    std::vector<double> hbp{0.0};
    std::vector<Vec> hvals{{0.0}};
    std::vector<double> xbp;
    std::vector<Vec> xvals;
    if (build_x) {
        xbp.reserve(m + 1);
        xvals.reserve(m + 1);
        xbp.push_back(0.0);
        xvals.push_back({0.0});
    }

    long long S = 0;
    long long s_at_cap = 0;    // S at the step index floor(n * cap)
    long long h_curr = 0;      // H on the running segment, in {-1, 0, 1}
    long long tail_anchor = 0; // S at the opening of the current window
    long long tail_sign = 0;
    bool window_open = false;
    bool cap_closed = false;
    long long r = 0;
    long long integral_units = 0;
    long long max_abs = 0;
    long long remainder = 0;

    for (std::size_t k = 1; k <= m; ++k) {
        const double t = static_cast<double>(k) / nd;
        const long long xi = rng.coin() ? 1 : -1;
        // jump of X at t; H(t-) is the window value iff t has not passed the cap
        const long long h_left = t <= cap ? h_curr : 0;
        integral_units += h_left * xi;
        S += xi;
        max_abs = std::max(max_abs, std::llabs(S));
        if (t <= cap) s_at_cap = S;
        if (build_x) {
            xbp.push_back(t);
            xvals.push_back({static_cast<double>(S) * unit});
        }

        if (t >= cap) {
            if (!cap_closed) {
                cap_closed = true;
                if (window_open) {
                    remainder = tail_sign * (s_at_cap - tail_anchor);
                    window_open = false;
                }
                if (h_curr != 0) {
                    hbp.push_back(cap);
                    hvals.push_back({0.0});
                    h_curr = 0;
                }
            }
            continue;
        }

        long long h_next = h_curr;
        if (h_curr == 0) {
            // one step past a zero (or past the origin): a window opens
            h_next = S > 0 ? -1 : 1;
            tail_anchor = S;
            tail_sign = h_next;
            window_open = true;
        } else if (S == 0) {
            ++r; // a genuine crossing completed strictly before the cap
            h_next = 0;
            window_open = false;
        }
        if (h_next != h_curr) {
            hbp.push_back(t);
            hvals.push_back({static_cast<double>(h_next)});
            h_curr = h_next;
        }
    }
    if (!cap_closed) {
        // cap coincides with the horizon lattice end
        if (window_open) remainder = tail_sign * (s_at_cap - tail_anchor);
        if (h_curr != 0) {
            hbp.push_back(cap);
            hvals.push_back({0.0});
        }
    }

    out.r = r;
    out.integral_units = integral_units;
    out.rhs_units = r + remainder;
    out.max_abs_walk = max_abs;
    out.h = StepPath(1, T, std::move(hbp), std::move(hvals));
    if (build_x) out.x = StepPath(1, T, std::move(xbp), std::move(xvals));
    return out;
}

// --- named deterministic examples ---------------------------------------------

DeterministicExample deterministic_example(const std::string& id, std::size_t n) {
    if (n < 2) fail(ErrorCode::BadParameter, "need n >= 2");
    const double nd = static_cast<double>(n);
    if (id == "alternating") {
        const std::size_t m = n * n;
        std::vector<double> bp(m + 1);
        std::vector<Vec> vals(m + 1);
        const double jump = 1.0 / nd;
        for (std::size_t k = 0; k <= m; ++k) {
            bp[k] = static_cast<double>(k) / static_cast<double>(m);
            vals[k] = {(k % 2 == 1) ? -jump : 0.0};
        }
        DeterministicExample out{std::nullopt, StepPath(1, 1.0, std::move(bp), std::move(vals)),
                                 std::nullopt, StepPath::zero(1, 1.0)};
        return out;
    }
    if (id == "sawtooth") {
        const double a = std::pow(nd, -0.25);
        std::vector<double> xbp, hbp;
        std::vector<Vec> xvals, hvals;
        for (std::size_t i = 0; i < n; ++i) {
            const double base = static_cast<double>(i) / nd;
            xbp.insert(xbp.end(), {base, base + 0.5 / nd, base + 0.75 / nd});
            xvals.insert(xvals.end(), {{0.0}, {0.5 * a}, {a}});
            hbp.insert(hbp.end(), {base, base + 0.5 / nd});
            hvals.insert(hvals.end(), {{a}, {0.0}});
        }
        xbp.push_back(1.0);
        xvals.push_back({0.0});
        DeterministicExample out{StepPath(1, 1.0, std::move(hbp), std::move(hvals)),
                                 StepPath(1, 1.0, std::move(xbp), std::move(xvals)),
                                 StepPath::zero(1, 1.0), StepPath::zero(1, 1.0)};
        return out;
    }
    // two-stage indicator: c1 on [from, 1), c2 from 1 on; the first stage
    // degenerates into the initial segment when from reaches 0
    auto staged = [](double from, double c1, double c2) {
        if (from <= 0.0) return StepPath(1, 2.0, {0.0, 1.0}, {{c1}, {c2}});
        return StepPath(1, 2.0, {0.0, from, 1.0}, {{0.0}, {c1}, {c2}});
    };
    if (id == "zigzag") {
        StepPath xn = staged(1.0 - 1.0 / nd, 0.5, 1.0);
        StepPath yn = StepPath::indicator(2.0, 1.0 - 2.0 / nd);
        StepPath limit = StepPath::indicator(2.0, 1.0);
        DeterministicExample out{std::move(xn), std::move(yn), limit, limit};
        return out;
    }
    if (id == "fig6") {
        StepPath xn = staged(1.0 - 2.0 / nd, 0.25, 0.75);
        StepPath yn = staged(1.0 - 1.0 / nd, 0.5, 1.0);
        DeterministicExample out{std::move(xn), std::move(yn),
                                 StepPath::indicator(2.0, 1.0, 0.75), StepPath::indicator(2.0, 1.0)};
        return out;
    }
    fail(ErrorCode::UnknownId, "unknown deterministic example: " + id);
}

// --- delayed readout ------------------------------------------------------------

StepPath delayed_readout_integrand(const CtrwPath& ctrw, const std::vector<double>& times,
                                   const ReadoutFn& g, std::size_t delay) {
    if (times.empty() || times.front() != 0.0)
        fail(ErrorCode::BadParameter, "readout times must start at 0");
    if (ctrw.epochs.empty() && ctrw.path.segments() != 1)
        fail(ErrorCode::MissingInternals, "need the jump epochs of the integrator");
    const double sentinel = ctrw.path.values()[0][0];
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (double t : times) {
        if (t > ctrw.path.horizon()) break;
        // number of epochs <= t
        const std::size_t K = static_cast<std::size_t>(
            std::upper_bound(ctrw.epochs.begin(), ctrw.epochs.end(), t) - ctrw.epochs.begin());
        double readout = sentinel;
        if (K >= delay + 1) {
            const double xi_time = ctrw.epochs[K - delay - 1];
            readout = ctrw.path.evaluate(xi_time)[0];
        }
        bp.push_back(t);
        vals.push_back({g(t, readout)});
    }
    return StepPath(1, ctrw.path.horizon(), std::move(bp), std::move(vals));
}

ReadoutFn readout_by_name(const std::string& name) {
    if (name == "zero") return [](double, double) { return 0.0; };
    if (name == "identity") return [](double, double v) { return v; };
    if (name == "sign") return [](double, double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
    fail(ErrorCode::UnknownId, "unknown readout function: " + name);
}

// --- inverse subordinator ---------------------------------------------------------

InverseSubordinator inverse_subordinator_path(double beta, std::size_t n, double T, Seed seed,
                                              double wait_x_min, bool unit_waits) {
    if (!unit_waits && (!(beta > 0.0) || !(beta < 1.0)))
        fail(ErrorCode::BadParameter, "beta must be in (0, 1)");
    if (n == 0 || !(T > 0.0)) fail(ErrorCode::BadParameter, "need n >= 1, T > 0");
    RngStream waits(Seed{seed.master, seed.replica, StreamWaits});
    const double nd = static_cast<double>(n);
    // unit waits use the beta = 1 scale convention, giving the identity-like staircase
    const double scale = unit_waits ? 1.0 / nd : std::pow(nd, -1.0 / beta);

    std::vector<double> epochs{0.0}; // L_0 = 0
    double L = 0.0;
    while (epochs.back() <= T) {
        L += unit_waits ? 1.0 : wait_x_min * std::pow(1.0 - waits.uniform01(), -1.0 / beta);
        epochs.push_back(L * scale);
    }

    // D^{-1}(t) = inf{s : L(floor(ns)) / n^{1/beta} > t} = (k + 1) / n on
    // [epochs[k], epochs[k+1]).
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (std::size_t k = 0; k + 1 < epochs.size(); ++k) {
        if (epochs[k] > T) break;
        if (!bp.empty() && epochs[k] <= bp.back()) continue;
        bp.push_back(epochs[k]);
        vals.push_back({static_cast<double>(k + 1) / nd});
    }
    InverseSubordinator out{StepPath(1, T, std::move(bp), std::move(vals)), std::move(epochs)};
    return out;
}

} // namespace skolab
