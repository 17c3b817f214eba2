#include "skolab/innovations.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace skolab {

namespace {

constexpr double kPi = std::numbers::pi;

double pareto_draw(double alpha, double x_min, RngStream& rng) {
    return x_min * std::pow(1.0 - rng.uniform01(), -1.0 / alpha);
}

double gaussian_draw(RngStream& rng) {
    // Box-Muller; consumes exactly two uniforms.
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

} // namespace

double stable_draw(double alpha, double skew, RngStream& rng) {
    const double u = kPi * (rng.uniform01() - 0.5); // uniform on (-pi/2, pi/2)
    const double w = rng.exponential();
    if (alpha == 2.0) {
        // S_2(1, 0, 0) is N(0, 2); reuse the same two base variates.
        return 2.0 * std::sqrt(w) * std::sin(u);
    }
    if (alpha == 1.0 && skew == 0.0) return std::tan(u);
    if (skew == 0.0) {
        return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
               std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    }
    const double zeta = -skew * std::tan(kPi * alpha / 2.0);
    const double xi = std::atan(-zeta) / alpha;
    const double scale = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha));
    return scale * std::sin(alpha * (u + xi)) / std::pow(std::cos(u), 1.0 / alpha) *
           std::pow(std::cos(u - alpha * (u + xi)) / w, (1.0 - alpha) / alpha);
}

void InnovationModel::validate() const {
    switch (kind) {
        case InnovationKind::ParetoRademacher:
        case InnovationKind::Stable:
            if (!(alpha > 0.0) || alpha > 2.0) fail(ErrorCode::BadParameter, "alpha must be in (0, 2]");
            if (kind == InnovationKind::Stable && (skew < -1.0 || skew > 1.0))
                fail(ErrorCode::BadParameter, "skew must be in [-1, 1]");
            if (kind == InnovationKind::ParetoRademacher && !(x_min > 0.0))
                fail(ErrorCode::BadParameter, "x_min must be positive");
            break;
        case InnovationKind::ParetoPositive:
            if (!(alpha > 0.0) || alpha >= 1.0)
                fail(ErrorCode::BadParameter, "waiting index must be in (0, 1)");
            if (!(x_min > 0.0)) fail(ErrorCode::BadParameter, "x_min must be positive");
            break;
        case InnovationKind::Gaussian:
            if (!(sigma > 0.0)) fail(ErrorCode::BadParameter, "sigma must be positive");
            break;
        case InnovationKind::Rademacher:
        case InnovationKind::Constant:
            break;
    }
}

double sample_innovation(const InnovationModel& model, RngStream& rng) {
    switch (model.kind) {
        case InnovationKind::ParetoRademacher: {
            const double w = pareto_draw(model.alpha, model.x_min, rng);
            return rng.coin() ? w : -w;
        }
        case InnovationKind::Stable:
            return model.scale * stable_draw(model.alpha, model.skew, rng);
        case InnovationKind::Gaussian:
            return model.sigma * gaussian_draw(rng);
        case InnovationKind::Rademacher:
            return rng.coin() ? 1.0 : -1.0;
        case InnovationKind::Constant:
            return model.c;
        case InnovationKind::ParetoPositive:
            return pareto_draw(model.alpha, model.x_min, rng);
    }
    fail(ErrorCode::BadParameter, "unknown innovation kind");
}

std::vector<double> sample_innovations(const InnovationModel& model, std::size_t count, Seed seed) {
    if (count == 0) fail(ErrorCode::BadParameter, "count must be at least 1");
    model.validate();
    RngStream rng(seed);
    std::vector<double> out(count);
    for (double& x : out) x = sample_innovation(model, rng);
    return out;
}

namespace {

// Density of a strictly alpha-stable law (unit scale, alpha != 1) through the
// inversion formula f(x) = pi^{-1} int_0^inf e^{-t^alpha} cos(t x - skew *
// tan(pi alpha / 2) t^alpha) dt, integrated by composite Gauss-Legendre.
double stable_density(double x, double alpha, double skew) {
    static const double nodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                    -0.5255324099163290, -0.1834346424956498,
                                    0.1834346424956498,  0.5255324099163290,
                                    0.7966664774136267,  0.9602898564975363};
    static const double weights[8] = {0.1012285362903763, 0.2223810344533745,
                                      0.3137066458778873, 0.3626837833783620,
                                      0.3626837833783620, 0.3137066458778873,
                                      0.2223810344533745, 0.1012285362903763};
    const double shift = -skew * std::tan(kPi * alpha / 2.0);
    double total = 0.0;
    const double t_cap = std::pow(40.0, 1.0 / alpha); // e^{-t^alpha} below 4e-18 past this
    const std::size_t panels = 512;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = t_cap * static_cast<double>(p) / panels;
        const double b = t_cap * static_cast<double>(p + 1) / panels;
        double acc = 0.0;
        for (int g = 0; g < 8; ++g) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * nodes[g];
            const double ta = std::pow(t, alpha);
            acc += weights[g] * std::exp(-ta) * std::cos(t * x + shift * ta);
        }
        total += 0.5 * (b - a) * acc;
    }
    return total / kPi;
}

} // namespace

double truncated_mean(const InnovationModel& model, double cut) {
    model.validate();
    if (!(cut >= 0.0)) fail(ErrorCode::BadParameter, "cut must be nonnegative");
    switch (model.kind) {
        case InnovationKind::ParetoRademacher:
        case InnovationKind::Rademacher:
        case InnovationKind::Gaussian:
            return 0.0; // symmetric around zero
        case InnovationKind::Constant:
            return std::fabs(model.c) <= cut ? model.c : 0.0;
        case InnovationKind::ParetoPositive: {
            const double a = model.alpha, m = model.x_min;
            if (cut < m) return 0.0;
            if (a == 1.0) return m * std::log(cut / m);
            return a * std::pow(m, a) * (std::pow(cut, 1.0 - a) - std::pow(m, 1.0 - a)) / (1.0 - a);
        }
        case InnovationKind::Stable: {
            if (model.skew == 0.0) return 0.0;
            if (model.alpha == 1.0)
                fail(ErrorCode::BadParameter, "skewed stable with alpha = 1 not supported");
            // int_{-cut}^{cut} x f(x) dx by Gauss-Legendre over the scaled density.
            const double s = model.scale;
            static const double nodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                            -0.5255324099163290, -0.1834346424956498,
                                            0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
            static const double weights[8] = {0.1012285362903763, 0.2223810344533745,
                                              0.3137066458778873, 0.3626837833783620,
                                              0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};
            const std::size_t panels = 64;
            double total = 0.0;
            for (std::size_t p = 0; p < panels; ++p) {
                const double a = -cut + 2.0 * cut * static_cast<double>(p) / panels;
                const double b = -cut + 2.0 * cut * static_cast<double>(p + 1) / panels;
                double acc = 0.0;
                for (int g = 0; g < 8; ++g) {
                    const double x = 0.5 * (a + b) + 0.5 * (b - a) * nodes[g];
                    acc += weights[g] * x * stable_density(x / s, model.alpha, model.skew) / s;
                }
                total += 0.5 * (b - a) * acc;
            }
            return total;
        }
    }
    fail(ErrorCode::BadParameter, "unknown innovation kind");
}

InnovationModel InnovationModel::parse(const std::string& spec) {
    // kind(p1, p2, ...) with positional parameters as documented per kind.
    InnovationModel m;
    const auto open = spec.find('(');
    const std::string name = open == std::string::npos ? spec : spec.substr(0, open);
    std::vector<double> args;
    if (open != std::string::npos) {
        const auto close = spec.rfind(')');
        if (close == std::string::npos || close < open)
            fail(ErrorCode::BadParameter, "unbalanced parentheses in innovation spec");
        std::stringstream ss(spec.substr(open + 1, close - open - 1));
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) args.push_back(std::stod(tok));
    }
    auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? args[i] : fallback; };
    if (name == "pareto_rademacher") {
        m.kind = InnovationKind::ParetoRademacher;
        m.alpha = arg(0, 1.5);
        m.x_min = arg(1, 1.0);
    } else if (name == "stable") {
        m.kind = InnovationKind::Stable;
        m.alpha = arg(0, 1.5);
        m.skew = arg(1, 0.0);
        m.scale = arg(2, 1.0);
    } else if (name == "gaussian") {
        m.kind = InnovationKind::Gaussian;
        m.sigma = arg(0, 1.0);
    } else if (name == "rademacher") {
        m.kind = InnovationKind::Rademacher;
    } else if (name == "constant") {
        m.kind = InnovationKind::Constant;
        m.c = arg(0, 1.0);
    } else if (name == "pareto_positive") {
        m.kind = InnovationKind::ParetoPositive;
        m.alpha = arg(0, 0.8);
        m.x_min = arg(1, 1.0);
    } else {
        fail(ErrorCode::BadParameter, "unknown innovation kind: " + name);
    }
    m.validate();
    return m;
}

std::string InnovationModel::describe() const {
    std::ostringstream out;
    switch (kind) {
        case InnovationKind::ParetoRademacher:
            out << "pareto_rademacher(" << alpha << "," << x_min << ")";
            break;
        case InnovationKind::Stable: out << "stable(" << alpha << "," << skew << "," << scale << ")"; break;
        case InnovationKind::Gaussian: out << "gaussian(" << sigma << ")"; break;
        case InnovationKind::Rademacher: out << "rademacher"; break;
        case InnovationKind::Constant: out << "constant(" << c << ")"; break;
        case InnovationKind::ParetoPositive: out << "pareto_positive(" << alpha << "," << x_min << ")"; break;
    }
    return out.str();
}

} // namespace skolab
