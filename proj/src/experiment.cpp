#include "skolab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "skolab/integrals.hpp"
#include "skolab/metrics.hpp"

namespace skolab {

using nlohmann::json;

namespace {

std::string num(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

double sup_norm(const StepPath& p, double T) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.segments(); ++i) {
        if (p.breakpoints()[i] > T) break;
        best = std::max(best, norm2(p.values()[i]));
    }
    return best;
}

double vec_sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace

std::string FunctionalSpec::label() const {
    std::ostringstream out;
    out << kind;
    if (kind == "integral_at" || kind == "quad_var") out << "(" << t << ")";
    else if (kind == "sup_norm" || kind == "tv" || kind == "integral_pair_m1") out << "(" << T << ")";
    else if (kind == "w_hat" || kind == "n_delta") out << "(" << delta << "," << T << ")";
    else if (kind == "w_prime" || kind == "w_dprime") out << "(" << theta << "," << T << ")";
    else if (kind == "metric_to_reference") out << "(" << metric << "," << T << ")";
    else if (kind == "scalar") out << "(" << scalar << ")";
    if (on != "x" && kind != "scalar") out << "@" << on;
    return out.str();
}

FunctionalSpec FunctionalSpec::from_json(const json& j) {
    FunctionalSpec f;
    f.kind = j.at("kind").get<std::string>();
    f.t = j.value("t", 1.0);
    f.T = j.value("T", 1.0);
    f.delta = j.value("delta", 0.1);
    f.theta = j.value("theta", 0.1);
    f.on = j.value("on", "x");
    f.metric = j.value("metric", "m1");
    f.scalar = j.value("scalar", "");
    return f;
}

json FunctionalSpec::to_json() const {
    json j;
    j["kind"] = kind;
    j["t"] = t;
    j["T"] = T;
    j["delta"] = delta;
    j["theta"] = theta;
    j["on"] = on;
    j["metric"] = metric;
    if (!scalar.empty()) j["scalar"] = scalar;
    return j;
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
    ExperimentSpec s;
    const json& c = j.at("construction");
    s.construction = c.at("id").get<std::string>();
    s.params = c;
    s.params.erase("id");
    s.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    if (s.n_grid.empty()) fail(ErrorCode::BadParameter, "n_grid must be nonempty");
    for (std::size_t i = 1; i < s.n_grid.size(); ++i)
        if (s.n_grid[i] <= s.n_grid[i - 1]) fail(ErrorCode::BadParameter, "n_grid must ascend");
    s.replicas = j.value("replicas", std::size_t{200});
    if (s.replicas == 0) fail(ErrorCode::BadParameter, "need at least one replica");
    if (j.contains("functionals"))
        for (const auto& e : j.at("functionals")) s.functionals.push_back(FunctionalSpec::from_json(e));
    s.seed = j.value("seed", std::uint64_t{0});
    s.sink = j.value("sink", "");
    return s;
}

json ExperimentSpec::to_json() const {
    json j;
    json c = params;
    c["id"] = construction;
    j["construction"] = c;
    j["n_grid"] = n_grid;
    j["replicas"] = replicas;
    json fs = json::array();
    for (const auto& f : functionals) fs.push_back(f.to_json());
    j["functionals"] = fs;
    j["seed"] = seed;
    if (!sink.empty()) j["sink"] = sink;
    return j;
}

std::string ExperimentSpec::hash() const { return fnv1a_hex(to_json().dump()); }

std::size_t effective_threads() {
    std::size_t n = 1;
#ifdef _OPENMP
    n = static_cast<std::size_t>(omp_get_max_threads());
#endif
    if (const char* env = std::getenv("SKOLAB_THREADS")) {
        const long cap = std::atol(env);
        if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    }
    return n;
}

DiagnosticsReport run_replicas(const std::string& construction, const json& params,
                               const std::vector<std::size_t>& n_grid, std::size_t replicas,
                               std::uint64_t seed, const ReplicaEvaluator& evaluator,
                               const std::string& spec_hash, bool parallel) {
    DiagnosticsReport report;
    report.seed = seed;
    report.replicas = replicas;
    report.n_grid = n_grid;
    report.spec_hash = spec_hash;

    for (std::size_t n : n_grid) {
        // per-replica rows, slotted by replica index so that aggregation order
        // never depends on the thread schedule
        std::vector<std::vector<CellValue>> rows(replicas);
        std::exception_ptr first_error = nullptr;
        const std::size_t threads = parallel ? effective_threads() : 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(threads)) if (threads > 1)
#endif
        for (long long rep = 0; rep < static_cast<long long>(replicas); ++rep) {
            try {
                const Seed s{seed, static_cast<std::uint64_t>(rep), 0};
                const PathBundle bundle = make_construction(construction, params, n, s);
                evaluator(bundle, n, rows[static_cast<std::size_t>(rep)]);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);

        // deterministic fold in replica order
        std::map<std::pair<std::string, std::string>, std::size_t> index;
        for (std::size_t i = 0; i < report.cells.size(); ++i)
            if (report.cells[i].n == n)
                index[{report.cells[i].functional, report.cells[i].param}] = i;
        for (std::size_t rep = 0; rep < replicas; ++rep) {
            for (const CellValue& cv : rows[rep]) {
                auto [it, inserted] = index.try_emplace({cv.functional, cv.param}, report.cells.size());
                if (inserted) {
                    ReportCell cell;
                    cell.functional = cv.functional;
                    cell.param = cv.param;
                    cell.n = n;
                    cell.indicator = cv.indicator;
                    cell.samples.assign(replicas, std::numeric_limits<double>::quiet_NaN());
                    report.cells.push_back(std::move(cell));
                }
                report.cells[it->second].samples[rep] = cv.value;
            }
        }
    }
    report.finalize();
    report.compute_trends();
    return report;
}

namespace {

double evaluate_functional(const FunctionalSpec& f, const PathBundle& b) {
    if (f.kind == "integral_at") {
        if (b.h && b.x) return vec_sum(simple_integral_at(*b.h, *b.x, f.t));
        auto it = b.scalars.find("integral_tail");
        if (it != b.scalars.end()) return it->second;
        fail(ErrorCode::MissingInternals, "integral_at needs an (h, x) pair");
    }
    if (f.kind == "sup_norm") {
        if (f.on == "x" && !b.x) {
            auto it = b.scalars.find("sup_x");
            if (it != b.scalars.end()) return it->second;
        }
        return sup_norm(b.on(f.on), f.T);
    }
    if (f.kind == "tv") return b.on(f.on).total_variation_sum(0.0, f.T);
    if (f.kind == "quad_var") {
        const StepPath& p = b.on(f.on);
        return vec_sum(quad_covariation(p, p).evaluate(f.t));
    }
    if (f.kind == "w_hat") {
        if (!b.h || !b.x) fail(ErrorCode::MissingInternals, "w_hat needs an (h, x) pair");
        return consecutive_increment(*b.h, *b.x, f.delta, f.T);
    }
    if (f.kind == "n_delta") return static_cast<double>(increment_count(b.on(f.on), f.delta, f.T));
    if (f.kind == "w_prime") return w_prime(b.on(f.on), f.theta, f.T);
    if (f.kind == "w_dprime") return w_dprime(b.on(f.on), f.theta, f.T);
    if (f.kind == "metric_to_reference") {
        const StepPath* ref = f.on == "h" ? (b.h_limit ? &*b.h_limit : nullptr)
                                          : (b.x_limit ? &*b.x_limit : nullptr);
        if (ref == nullptr) fail(ErrorCode::MissingInternals, "construction has no reference path");
        const StepPath& p = b.on(f.on);
        if (f.metric == "uniform") return uniform_distance(p, *ref, f.T);
        if (f.metric == "j1") return j1_distance(p, *ref, f.T);
        if (f.metric == "m1") return m1_distance(p, *ref, f.T);
        fail(ErrorCode::BadParameter, "unknown metric: " + f.metric);
    }
    if (f.kind == "integral_pair_m1") {
        if (!b.h || !b.x || !b.h_limit || !b.x_limit)
            fail(ErrorCode::MissingInternals, "integral_pair_m1 needs pair and limits");
        const StepPath i1 = simple_integral(*b.h, *b.x);
        const StepPath i2 = simple_integral(*b.x, *b.h);
        const StepPath l1 = simple_integral(*b.h_limit, *b.x_limit);
        const StepPath l2 = simple_integral(*b.x_limit, *b.h_limit);
        return m1_distance(amalgamate(i1, i2), amalgamate(l1, l2), f.T);
    }
    if (f.kind == "scalar") {
        auto it = b.scalars.find(f.scalar);
        if (it == b.scalars.end()) fail(ErrorCode::MissingInternals, "no scalar " + f.scalar);
        return it->second;
    }
    fail(ErrorCode::BadParameter, "unknown functional kind: " + f.kind);
}

} // namespace

DiagnosticsReport run_experiment(const ExperimentSpec& spec, bool parallel) {
    auto evaluator = [&spec](const PathBundle& b, std::size_t, std::vector<CellValue>& out) {
        for (const FunctionalSpec& f : spec.functionals)
            out.push_back({f.label(), "", false, evaluate_functional(f, b)});
    };
    return run_replicas(spec.construction, spec.params, spec.n_grid, spec.replicas, spec.seed,
                        evaluator, spec.hash(), parallel);
}

DiagnosticsReport gd_diagnostics(const ExperimentSpec& base, double t,
                                 const std::vector<double>& c_grid,
                                 const std::vector<double>& R_grid, bool parallel) {
    auto evaluator = [&, t](const PathBundle& b, std::size_t, std::vector<CellValue>& out) {
        if (!b.martingale || !b.finite_variation)
            fail(ErrorCode::MissingInternals, "gd diagnostics need an (M, A) decomposition");
        const StepPath& M = *b.martingale;
        const StepPath& A = *b.finite_variation;
        const double tv = A.total_variation_sum(0.0, t);
        out.push_back({"tv_A(" + num(t) + ")", "", false, tv});
        for (double R : R_grid)
            out.push_back({"P(tv_A>R)", "R=" + num(R), true, tv > R ? 1.0 : 0.0});

        // |dM| at t ^ tau_c, tau_c the first time the running sup reaches c
        const auto& bp = M.breakpoints();
        std::vector<double> runsup(bp.size());
        double rs = 0.0;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            rs = std::max(rs, norm2(M.values()[i]));
            runsup[i] = rs;
        }
        for (double c : c_grid) {
            double stop = t;
            for (std::size_t i = 0; i < bp.size(); ++i)
                if (runsup[i] >= c) {
                    stop = std::min(t, bp[i]);
                    break;
                }
            // jump of M at the stopped time (zero if M does not jump there)
            double jump = 0.0;
            const auto it = std::lower_bound(bp.begin(), bp.end(), stop);
            if (it != bp.end() && *it == stop && it != bp.begin()) {
                const std::size_t i = static_cast<std::size_t>(it - bp.begin());
                jump = norm2_diff(M.values()[i], M.values()[i - 1]);
            }
            out.push_back({"abs_dM_stopped", "c=" + num(c), false, jump});
        }
        // classical variation-control diagnostics
        out.push_back({"quad_var_M(" + num(t) + ")", "", false,
                       vec_sum(quad_covariation(M, M).evaluate(std::min(t, M.horizon())))});
    };
    return run_replicas(base.construction, base.params, base.n_grid, base.replicas, base.seed,
                        evaluator, base.hash(), parallel);
}

DiagnosticsReport avci_estimate(const ExperimentSpec& base, const std::vector<double>& delta_grid,
                                double gamma, double T, bool parallel) {
    if (!(gamma > 0.0)) fail(ErrorCode::BadParameter, "gamma must be positive");
    auto evaluator = [&](const PathBundle& b, std::size_t, std::vector<CellValue>& out) {
        if (!b.h || !b.x) fail(ErrorCode::MissingInternals, "avci needs an (h, x) pair");
        for (double d : delta_grid) {
            const double w = consecutive_increment(*b.h, *b.x, d, T);
            out.push_back({"P(w_hat>" + num(gamma) + ")", "delta=" + num(d), true, w > gamma ? 1.0 : 0.0});
            out.push_back({"w_hat", "delta=" + num(d), false, w});
        }
    };
    return run_replicas(base.construction, base.params, base.n_grid, base.replicas, base.seed,
                        evaluator, base.hash(), parallel);
}

DiagnosticsReport f_conditions_report(const ExperimentSpec& base,
                                      const std::vector<double>& delta_grid, double T, bool parallel) {
    auto evaluator = [&](const PathBundle& b, std::size_t, std::vector<CellValue>& out) {
        if (!b.h) fail(ErrorCode::MissingInternals, "integrand conditions need h");
        out.push_back({"sup_H(" + num(T) + ")", "", false, sup_norm(*b.h, T)});
        for (double d : delta_grid)
            out.push_back({"n_delta_H", "delta=" + num(d), false,
                           static_cast<double>(increment_count(*b.h, d, T))});
    };
    return run_replicas(base.construction, base.params, base.n_grid, base.replicas, base.seed,
                        evaluator, base.hash(), parallel);
}

DiagnosticsReport restart_increment_estimate(const ExperimentSpec& base,
                                             const std::vector<double>& delta_grid, double lambda,
                                             double T, bool parallel) {
    if (!(lambda > 0.0)) fail(ErrorCode::BadParameter, "lambda must be positive");
    auto evaluator = [&](const PathBundle& b, std::size_t, std::vector<CellValue>& out) {
        if (!b.x) fail(ErrorCode::MissingInternals, "restart estimate needs x");
        if (b.epochs.empty() && b.x->segments() > 1)
            fail(ErrorCode::MissingInternals, "restart estimate needs the jump epochs");
        const StepPath& X = *b.x;
        std::vector<double> sigma{0.0};
        for (double e : b.epochs) {
            if (e > T) break;
            sigma.push_back(e);
        }
        for (double d : delta_grid) {
            for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
                // sup over sigma_k <= s < sigma_{k+1} <= r <= sigma_{k+1} + delta
                // of |X_{r ^ T} - X_s|; X is flat between epochs, so X_s is the
                // value at sigma_k and the sup over r runs over breakpoints.
                const Vec xs = X.evaluate(sigma[k]);
                const double hi = sigma[k + 1] + d;
                double sup = 0.0;
                const auto& bp = X.breakpoints();
                auto it = std::lower_bound(bp.begin(), bp.end(), sigma[k + 1]);
                for (; it != bp.end() && *it <= hi; ++it) {
                    if (*it > T) break;
                    sup = std::max(sup, norm2_diff(X.values()[static_cast<std::size_t>(it - bp.begin())], xs));
                }
                sup = std::max(sup, norm2_diff(X.evaluate(std::min(hi, T)), xs));
                out.push_back({"P(restart>" + num(lambda) + ")",
                               "delta=" + num(d) + ",k=" + std::to_string(k), true,
                               sup > lambda ? 1.0 : 0.0});
            }
        }
    };
    DiagnosticsReport rep = run_replicas(base.construction, base.params, base.n_grid, base.replicas,
                                         base.seed, evaluator, base.hash(), parallel);
    // collapse to the worst-over-k probability per (n, delta)
    DiagnosticsReport out = rep;
    out.cells.clear();
    for (std::size_t n : rep.n_grid) {
        for (double d : delta_grid) {
            const std::string prefix = "delta=" + num(d) + ",k=";
            ReportCell worst;
            bool found = false;
            for (const auto& c : rep.cells) {
                if (c.n != n || c.param.rfind(prefix, 0) != 0) continue;
                if (!found || c.prob > worst.prob) {
                    worst = c;
                    found = true;
                }
            }
            if (!found) {
                worst.n = n;
                worst.indicator = true;
                worst.samples.assign(rep.replicas, 0.0);
                worst.finalize(rep.replicas);
            }
            worst.functional = "sup_k P(restart>" + num(lambda) + ")";
            worst.param = "delta=" + num(d);
            out.cells.push_back(std::move(worst));
        }
    }
    out.sort_cells();
    out.compute_trends();
    return out;
}

DiagnosticsReport tightness_report(const ExperimentSpec& base, const std::vector<double>& theta_grid,
                                   double T, bool parallel) {
    auto evaluator = [&](const PathBundle& b, std::size_t n, std::vector<CellValue>& out) {
        const StepPath& X = b.primary();
        out.push_back({"sup_X(" + num(T) + ")", "", false, sup_norm(X, T)});
        for (double th : theta_grid) {
            const double theta = th > 0.0 ? th : 2.0 / static_cast<double>(n); // sentinel: theta = 2/n
            const std::string p = th > 0.0 ? "theta=" + num(th) : "theta=2/n";
            out.push_back({"w_prime", p, false, w_prime(X, theta, T)});
            out.push_back({"w_dprime", p, false, w_dprime(X, theta, T)});
        }
    };
    return run_replicas(base.construction, base.params, base.n_grid, base.replicas, base.seed,
                        evaluator, base.hash(), parallel);
}

TrendSummary convergence_trend(const std::vector<DiagnosticsReport>& reports) {
    if (reports.size() < 3) fail(ErrorCode::InsufficientData, "need at least 3 scales");
    DiagnosticsReport merged = reports[0];
    // reports keyed by n: union their cells (same replicas)
    for (std::size_t i = 1; i < reports.size(); ++i)
        for (const auto& c : reports[i].cells) {
            if (merged.find(c.functional, c.param, c.n) != nullptr)
                fail(ErrorCode::BadParameter, "duplicate scale across reports");
            merged.cells.push_back(c);
        }
    merged.finalize();
    merged.compute_trends();
    return TrendSummary{merged.trends};
}

} // namespace skolab
