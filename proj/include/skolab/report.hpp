#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace skolab {

struct WilsonInterval {
    double center = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};

/// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson95(std::size_t successes, std::size_t total);

/// Linear-interpolation quantile (type 7) of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double level);

/// Distribution-free 95% confidence interval for the median via
/// order-statistic ranks (normal approximation to the binomial ranks).
std::pair<double, double> median_ci95(const std::vector<double>& sorted);

/// One report cell: all replica values of one functional at one (n, param).
struct ReportCell {
    std::string functional;
    std::string param; // secondary parameter rendering, "" if none
    std::size_t n = 0;
    std::vector<double> samples; // indexed by replica, missing = NaN
    bool indicator = false;      // probability cell (values in {0, 1})

    // derived statistics (filled by finalize)
    double mean = 0.0;
    double stddev = 0.0;
    double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
    double median_lo = 0.0, median_hi = 0.0;
    double prob = 0.0, prob_lo = 0.0, prob_hi = 1.0;

    void finalize(std::size_t total_replicas);
};

struct TrendLine {
    std::string functional;
    std::string param;
    std::string verdict; // increasing | decreasing | flat | mixed
    double slope = 0.0;  // least-squares slope of log(median) vs log(n)
    double residual = 0.0;
};

struct DiagnosticsReport {
    std::uint64_t seed = 0;
    std::size_t replicas = 0;
    std::vector<std::size_t> n_grid;
    std::string spec_hash;
    std::size_t replica_offset = 0; // first replica index covered
    std::vector<ReportCell> cells;  // sorted by (functional, param, n)
    std::vector<TrendLine> trends;

    ReportCell* find(const std::string& functional, const std::string& param, std::size_t n);
    const ReportCell* find(const std::string& functional, const std::string& param,
                           std::size_t n) const;

    void sort_cells();
    void finalize();
    void compute_trends();

    /// Merge with a report over a disjoint replica range; associative and
    /// commutative, the union report is identical either way.
    void merge(const DiagnosticsReport& other);

    nlohmann::json to_json(bool include_samples = false) const;
    static DiagnosticsReport from_json(const nlohmann::json& j);
    std::string to_csv() const; // long format: n,param,functional,stat,value,lo,hi
};

/// FNV-1a 64-bit hash, hex-encoded; used as the provenance hash of spec JSON.
std::string fnv1a_hex(const std::string& bytes);

} // namespace skolab
