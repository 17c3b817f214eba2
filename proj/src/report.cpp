#include "skolab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skolab/errors.hpp"

namespace skolab {

using nlohmann::json;

WilsonInterval wilson95(std::size_t successes, std::size_t total) {
    const double z = 1.959963984540054;
    if (total == 0) return {};
    const double nd = static_cast<double>(total);
    const double p = static_cast<double>(successes) / nd;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nd;
    const double center = (p + z2 / (2.0 * nd)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / denom;
    return {center, std::max(0.0, center - half), std::min(1.0, center + half)};
}

double quantile_sorted(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (sorted.size() == 1) return sorted[0];
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::pair<double, double> median_ci95(const std::vector<double>& sorted) {
    const std::size_t m = sorted.size();
    if (m == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    if (m < 6) return {sorted.front(), sorted.back()};
    const double z = 1.959963984540054;
    const double half = z * std::sqrt(static_cast<double>(m)) / 2.0;
    const double mid = static_cast<double>(m) / 2.0;
    std::size_t lo = static_cast<std::size_t>(std::max(0.0, std::floor(mid - half)));
    std::size_t hi = static_cast<std::size_t>(std::min(static_cast<double>(m - 1), std::ceil(mid + half)));
    return {sorted[lo], sorted[hi]};
}

void ReportCell::finalize(std::size_t total_replicas) {
    std::vector<double> clean;
    clean.reserve(samples.size());
    for (double v : samples)
        if (!std::isnan(v)) clean.push_back(v);
    std::sort(clean.begin(), clean.end());
    if (!clean.empty()) {
        double s = 0.0;
        for (double v : clean) s += v;
        mean = s / static_cast<double>(clean.size());
        double ss = 0.0;
        for (double v : clean) ss += (v - mean) * (v - mean);
        stddev = clean.size() > 1 ? std::sqrt(ss / static_cast<double>(clean.size() - 1)) : 0.0;
        q05 = quantile_sorted(clean, 0.05);
        q25 = quantile_sorted(clean, 0.25);
        q50 = quantile_sorted(clean, 0.50);
        q75 = quantile_sorted(clean, 0.75);
        q95 = quantile_sorted(clean, 0.95);
        auto [ml, mh] = median_ci95(clean);
        median_lo = ml;
        median_hi = mh;
    }
    if (indicator) {
        std::size_t hits = 0;
        for (double v : clean)
            if (v != 0.0) ++hits;
        // sparse indicator cells count missing replicas as zeros
        const auto w = wilson95(hits, total_replicas);
        prob = total_replicas ? static_cast<double>(hits) / static_cast<double>(total_replicas) : 0.0;
        prob_lo = w.lo;
        prob_hi = w.hi;
    }
}

namespace {

bool cell_order(const ReportCell& a, const ReportCell& b) {
    return std::tie(a.functional, a.param, a.n) < std::tie(b.functional, b.param, b.n);
}

} // namespace

ReportCell* DiagnosticsReport::find(const std::string& functional, const std::string& param,
                                    std::size_t n) {
    for (auto& c : cells)
        if (c.functional == functional && c.param == param && c.n == n) return &c;
    return nullptr;
}

const ReportCell* DiagnosticsReport::find(const std::string& functional, const std::string& param,
                                          std::size_t n) const {
    for (const auto& c : cells)
        if (c.functional == functional && c.param == param && c.n == n) return &c;
    return nullptr;
}

void DiagnosticsReport::sort_cells() { std::sort(cells.begin(), cells.end(), cell_order); }

void DiagnosticsReport::finalize() {
    sort_cells();
    for (auto& c : cells) c.finalize(replicas);
}

void DiagnosticsReport::compute_trends() {
    trends.clear();
    // group cells by (functional, param); need medians across at least 3 n's
    std::map<std::pair<std::string, std::string>, std::vector<const ReportCell*>> groups;
    for (const auto& c : cells) groups[{c.functional, c.param}].push_back(&c);
    for (auto& [key, group] : groups) {
        if (group.size() < 3) continue;
        std::sort(group.begin(), group.end(),
                  [](const ReportCell* a, const ReportCell* b) { return a->n < b->n; });
        TrendLine t;
        t.functional = key.first;
        t.param = key.second;
        bool inc = true, dec = true, flat = true;
        for (std::size_t i = 1; i < group.size(); ++i) {
            const ReportCell* a = group[i - 1];
            const ReportCell* b = group[i];
            // strict moves need non-overlapping median intervals
            const bool up = b->median_lo > a->median_hi;
            const bool down = b->median_hi < a->median_lo;
            if (!up) inc = false;
            if (!down) dec = false;
            if (up || down) flat = false;
        }
        t.verdict = inc ? "increasing" : dec ? "decreasing" : flat ? "flat" : "mixed";
        // log-log slope of medians over n
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        bool positive = true;
        for (const ReportCell* c : group) {
            if (!(c->q50 > 0.0)) {
                positive = false;
                break;
            }
            const double lx = std::log(static_cast<double>(c->n));
            const double ly = std::log(c->q50);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        bool all_equal = true;
        for (const ReportCell* c : group)
            if (c->q50 != group[0]->q50) all_equal = false;
        if (all_equal) {
            t.slope = 0.0;
            t.residual = 0.0;
        } else if (positive && m >= 2) {
            const double md = static_cast<double>(m);
            t.slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
            const double icept = (sy - t.slope * sx) / md;
            double res = 0.0;
            for (const ReportCell* c : group) {
                const double e = std::log(c->q50) - (icept + t.slope * std::log(static_cast<double>(c->n)));
                res += e * e;
            }
            t.residual = std::sqrt(res / md);
        } else {
            t.slope = std::numeric_limits<double>::quiet_NaN();
            t.residual = std::numeric_limits<double>::quiet_NaN();
        }
        trends.push_back(std::move(t));
    }
}

void DiagnosticsReport::merge(const DiagnosticsReport& other) {
    if (seed != other.seed || spec_hash != other.spec_hash)
        fail(ErrorCode::BadParameter, "cannot merge reports from different specs");
    const bool this_first = replica_offset <= other.replica_offset;
    const std::size_t lo_off = this_first ? replica_offset : other.replica_offset;
    const std::size_t lo_n = this_first ? replicas : other.replicas;
    const std::size_t hi_off = this_first ? other.replica_offset : replica_offset;
    if (lo_off + lo_n != hi_off)
        fail(ErrorCode::BadParameter, "reports must cover adjacent disjoint replica ranges");
    for (const auto& oc : other.cells) {
        ReportCell* mine = find(oc.functional, oc.param, oc.n);
        if (mine == nullptr) {
            ReportCell fresh = oc;
            fresh.samples.assign(replicas, std::numeric_limits<double>::quiet_NaN());
            fresh.samples.insert(this_first ? fresh.samples.end() : fresh.samples.begin(),
                                 oc.samples.begin(), oc.samples.end());
            cells.push_back(std::move(fresh));
            continue;
        }
        if (this_first) mine->samples.insert(mine->samples.end(), oc.samples.begin(), oc.samples.end());
        else mine->samples.insert(mine->samples.begin(), oc.samples.begin(), oc.samples.end());
    }
    for (auto& c : cells) {
        if (c.samples.size() < replicas + other.replicas) {
            // cell absent on one side: pad with NaN in the right place
            const std::size_t miss = replicas + other.replicas - c.samples.size();
            c.samples.insert(this_first ? c.samples.end() : c.samples.begin(), miss,
                             std::numeric_limits<double>::quiet_NaN());
        }
    }
    replica_offset = lo_off;
    replicas += other.replicas;
    finalize();
    compute_trends();
}

json DiagnosticsReport::to_json(bool include_samples) const {
    json j;
    j["meta"] = {{"seed", seed},
                 {"replicas", replicas},
                 {"replica_offset", replica_offset},
                 {"n_grid", n_grid},
                 {"spec_hash", spec_hash}};
    json cs = json::array();
    for (const auto& c : cells) {
        json e;
        e["functional"] = c.functional;
        if (!c.param.empty()) e["param"] = c.param;
        e["n"] = c.n;
        e["mean"] = c.mean;
        e["stddev"] = c.stddev;
        e["quantiles"] = {{"q05", c.q05}, {"q25", c.q25}, {"q50", c.q50}, {"q75", c.q75}, {"q95", c.q95}};
        e["median_ci"] = {c.median_lo, c.median_hi};
        if (c.indicator) e["prob"] = {{"value", c.prob}, {"lo", c.prob_lo}, {"hi", c.prob_hi}};
        if (include_samples) e["samples"] = c.samples;
        cs.push_back(std::move(e));
    }
    j["cells"] = std::move(cs);
    json ts = json::array();
    for (const auto& t : trends) {
        json e;
        e["functional"] = t.functional;
        if (!t.param.empty()) e["param"] = t.param;
        e["verdict"] = t.verdict;
        if (std::isnan(t.slope)) e["slope"] = nullptr;
        else e["slope"] = t.slope;
        if (std::isnan(t.residual)) e["residual"] = nullptr;
        else e["residual"] = t.residual;
        ts.push_back(std::move(e));
    }
    j["trends"] = std::move(ts);
    return j;
}

DiagnosticsReport DiagnosticsReport::from_json(const json& j) {
    DiagnosticsReport r;
    r.seed = j.at("meta").at("seed").get<std::uint64_t>();
    r.replicas = j.at("meta").at("replicas").get<std::size_t>();
    r.replica_offset = j.at("meta").value("replica_offset", std::size_t{0});
    r.n_grid = j.at("meta").at("n_grid").get<std::vector<std::size_t>>();
    r.spec_hash = j.at("meta").at("spec_hash").get<std::string>();
    for (const auto& e : j.at("cells")) {
        ReportCell c;
        c.functional = e.at("functional").get<std::string>();
        c.param = e.value("param", "");
        c.n = e.at("n").get<std::size_t>();
        if (e.contains("samples")) c.samples = e.at("samples").get<std::vector<double>>();
        c.indicator = e.contains("prob");
        r.cells.push_back(std::move(c));
    }
    r.finalize();
    r.compute_trends();
    return r;
}

std::string DiagnosticsReport::to_csv() const {
    std::ostringstream out;
    out << "n,param,functional,stat,value,lo,hi\n";
    auto row = [&](const ReportCell& c, const std::string& stat, double v, double lo, double hi) {
        out << c.n << "," << c.param << "," << c.functional << "," << stat << "," << v << "," << lo
            << "," << hi << "\n";
    };
    for (const auto& c : cells) {
        row(c, "mean", c.mean, c.mean, c.mean);
        row(c, "q05", c.q05, c.q05, c.q05);
        row(c, "q25", c.q25, c.q25, c.q25);
        row(c, "median", c.q50, c.median_lo, c.median_hi);
        row(c, "q75", c.q75, c.q75, c.q75);
        row(c, "q95", c.q95, c.q95, c.q95);
        if (c.indicator) row(c, "prob", c.prob, c.prob_lo, c.prob_hi);
    }
    return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

} // namespace skolab
