#include "skolab/step_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skolab {

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm2_diff(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

StepPath::StepPath(std::size_t dim, double horizon, std::vector<double> breakpoints,
                   std::vector<Vec> values)
    : dim_(dim), horizon_(horizon), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (dim_ == 0) fail(ErrorCode::BadParameter, "dim must be positive");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
        fail(ErrorCode::BadParameter, "horizon must be positive and finite");
    if (breakpoints_.empty() || breakpoints_.front() != 0.0)
        fail(ErrorCode::NonMonotoneTimes, "first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            fail(ErrorCode::NonMonotoneTimes, "breakpoints must be strictly increasing");
    if (breakpoints_.back() > horizon_)
        fail(ErrorCode::HorizonExceeded, "breakpoint past horizon");
    if (values_.size() != breakpoints_.size())
        fail(ErrorCode::DimensionMismatch, "need exactly one value per segment");
    for (const Vec& v : values_) {
        if (v.size() != dim_) fail(ErrorCode::DimensionMismatch, "value dimension mismatch");
        for (double x : v)
            if (!std::isfinite(x)) fail(ErrorCode::NonFiniteValue, "non-finite path value");
    }
}

StepPath StepPath::constant(std::size_t dim, double horizon, Vec value) {
    return StepPath(dim, horizon, {0.0}, {std::move(value)});
}

StepPath StepPath::zero(std::size_t dim, double horizon) {
    return constant(dim, horizon, Vec(dim, 0.0));
}

StepPath StepPath::indicator(double horizon, double from, double c) {
    if (from <= 0.0) return constant(1, horizon, {c});
    if (from > horizon) return zero(1, horizon);
    return StepPath(1, horizon, {0.0, from}, {{0.0}, {c}});
}

std::size_t StepPath::segment_index(double t) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Vec StepPath::evaluate(double t, Side side) const {
    if (t < 0.0 || t > horizon_) fail(ErrorCode::OutOfHorizon, "evaluate outside [0, horizon]");
    if (side == Side::Right) return values_[segment_index(t)];
    // Left limit: previous segment value at a breakpoint; x(0-) = x(0).
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it != breakpoints_.end() && *it == t) {
        std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
        return values_[i == 0 ? 0 : i - 1];
    }
    return values_[segment_index(t)];
}

double StepPath::evaluate1(double t, Side side) const {
    return evaluate(t, side)[0];
}

std::vector<std::pair<double, Vec>> StepPath::jumps() const {
    std::vector<std::pair<double, Vec>> out;
    for (std::size_t i = 1; i < values_.size(); ++i) {
        Vec d(dim_);
        bool nonzero = false;
        for (std::size_t k = 0; k < dim_; ++k) {
            d[k] = values_[i][k] - values_[i - 1][k];
            nonzero = nonzero || d[k] != 0.0;
        }
        if (nonzero) out.emplace_back(breakpoints_[i], std::move(d));
    }
    return out;
}

Vec StepPath::total_variation(double a, double b) const {
    if (a < 0.0 || b > horizon_ || a > b) fail(ErrorCode::OutOfHorizon, "bad TV window");
    Vec tv(dim_, 0.0);
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const double t = breakpoints_[i];
        if (t <= a || t > b) continue;
        for (std::size_t k = 0; k < dim_; ++k) tv[k] += std::fabs(values_[i][k] - values_[i - 1][k]);
    }
    return tv;
}

double StepPath::total_variation_sum(double a, double b) const {
    const Vec tv = total_variation(a, b);
    double s = 0.0;
    for (double x : tv) s += x;
    return s;
}

StepPath StepPath::normalized() const {
    std::vector<double> bp{0.0};
    std::vector<Vec> vals{values_[0]};
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] != vals.back()) {
            bp.push_back(breakpoints_[i]);
            vals.push_back(values_[i]);
        }
    }
    return StepPath(dim_, horizon_, std::move(bp), std::move(vals));
}

StepPath StepPath::restrict(double T) const {
    if (T > horizon_) fail(ErrorCode::HorizonExceeded, "restrict past horizon");
    std::vector<double> bp;
    std::vector<Vec> vals;
    for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] <= T; ++i) {
        bp.push_back(breakpoints_[i]);
        vals.push_back(values_[i]);
    }
    return StepPath(dim_, T, std::move(bp), std::move(vals));
}

StepPath StepPath::extend(double T) const {
    if (T < horizon_) return restrict(T);
    return StepPath(dim_, T, breakpoints_, values_);
}

bool StepPath::same_bits(const StepPath& other) const {
    return dim_ == other.dim_ && horizon_ == other.horizon_ &&
           breakpoints_ == other.breakpoints_ && values_ == other.values_;
}

StepPath truncate_jumps(const StepPath& path, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::BadParameter, "delta must be positive");
    std::vector<double> bp{0.0};
    std::vector<Vec> vals{Vec(path.dim(), 0.0)};
    for (const auto& [t, d] : path.jumps()) {
        const double size = norm2(d);
        const double factor = std::isinf(delta) ? 0.0 : std::max(1.0 - delta / size, 0.0);
        if (factor <= 0.0) continue;
        Vec next = vals.back();
        for (std::size_t k = 0; k < d.size(); ++k) next[k] += factor * d[k];
        bp.push_back(t);
        vals.push_back(std::move(next));
    }
    return StepPath(path.dim(), path.horizon(), std::move(bp), std::move(vals));
}

std::vector<double> merged_breakpoints(const StepPath& a, const StepPath& b) {
    std::vector<double> times = a.breakpoints();
    times.insert(times.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

StepPath remove_large_jumps(const StepPath& path, double delta) {
    const StepPath jd = truncate_jumps(path, delta);
    std::vector<double> bp = merged_breakpoints(path, jd);
    std::vector<Vec> vals;
    vals.reserve(bp.size());
    for (double t : bp) {
        Vec v = path.values()[path.segment_index(t)];
        const Vec& w = jd.values()[jd.segment_index(t)];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= w[k];
        vals.push_back(std::move(v));
    }
    return StepPath(path.dim(), path.horizon(), std::move(bp), std::move(vals));
}

StepPath amalgamate(const std::vector<const StepPath*>& parts) {
    if (parts.empty()) fail(ErrorCode::BadParameter, "nothing to amalgamate");
    for (std::size_t i = 1; i < parts.size(); ++i) require_same_horizon(*parts[0], *parts[i]);
    std::vector<double> bp = parts[0]->breakpoints();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto& other = parts[i]->breakpoints();
        bp.insert(bp.end(), other.begin(), other.end());
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::size_t dim = 0;
    for (const StepPath* p : parts) dim += p->dim();
    std::vector<Vec> vals;
    vals.reserve(bp.size());
    for (double t : bp) {
        Vec v;
        v.reserve(dim);
        for (const StepPath* p : parts) {
            const Vec& w = p->values()[p->segment_index(t)];
            v.insert(v.end(), w.begin(), w.end());
        }
        vals.push_back(std::move(v));
    }
    return StepPath(dim, parts[0]->horizon(), std::move(bp), std::move(vals));
}

StepPath amalgamate(const StepPath& a, const StepPath& b) {
    return amalgamate(std::vector<const StepPath*>{&a, &b});
}

void require_same_dim(const StepPath& a, const StepPath& b) {
    if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "path dimensions differ");
}

void require_same_horizon(const StepPath& a, const StepPath& b) {
    if (a.horizon() != b.horizon())
        fail(ErrorCode::HorizonExceeded, "horizons differ; restrict or extend first");
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::HorizonExceeded: return "HorizonExceeded";
        case ErrorCode::OutOfHorizon: return "OutOfHorizon";
        case ErrorCode::RefinementTooSmall: return "RefinementTooSmall";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::MissingInternals: return "MissingInternals";
        case ErrorCode::NotUncorrelated: return "NotUncorrelated";
        case ErrorCode::InvalidRep: return "InvalidRep";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::UnknownConstruction: return "UnknownConstruction";
        case ErrorCode::SinkError: return "SinkError";
    }
    return "UnknownError";
}

} // namespace skolab
