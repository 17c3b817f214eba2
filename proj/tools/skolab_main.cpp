#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "skolab/constructions.hpp"
#include "skolab/experiment.hpp"
#include "skolab/integrals.hpp"
#include "skolab/metrics.hpp"
#include "skolab/path_io.hpp"
#include "skolab/reproduce.hpp"

using namespace skolab;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_file);
    if (!out) fail(ErrorCode::SinkError, "cannot open " + out_file);
    out << j.dump(2) << "\n";
}

int cmd_generate(const std::string& id, std::size_t n, std::uint64_t seed, std::uint64_t replica,
                 const std::string& params_json, const std::string& component,
                 const std::string& out_file) {
    const json params = params_json.empty() ? json::object() : json::parse(params_json);
    const PathBundle bundle = make_construction(id, params, n, Seed{seed, replica, 0});
    const StepPath& path = bundle.on(component);
    if (out_file.empty()) std::cout << path_to_json(path).dump(2) << "\n";
    else save_path(path, out_file);
    return 0;
}

int cmd_metric(const std::string& which, const std::string& file_a, const std::string& file_b,
               double T, double tol, bool upper_bound, bool csv, const std::string& base) {
    const StepPath a = load_path(file_a);
    const StepPath b = load_path(file_b);
    MetricOptions opts;
    opts.tolerance = tol;
    opts.mode = upper_bound ? MetricMode::UpperBound : MetricMode::Exact;
    double horizon = T > 0.0 ? T : std::min(a.horizon(), b.horizon());
    double value = 0.0;
    if (which == "uniform") value = uniform_distance(a, b, horizon);
    else if (which == "j1") value = j1_distance(a, b, horizon, opts);
    else if (which == "m1") value = m1_distance(a, b, horizon, opts);
    else if (which == "halfline") {
        if (base == "uniform") opts.base = BaseMetric::Uniform;
        else if (base == "j1") opts.base = BaseMetric::J1;
        else if (base == "m1") opts.base = BaseMetric::M1;
        else fail(ErrorCode::BadParameter, "unknown base metric: " + base);
        value = halfline_distance(a, b, opts);
    } else fail(ErrorCode::BadParameter, "unknown metric: " + which);
    json j{{"metric", which},
           {"value", value},
           {"tolerance", tol},
           {"mode", which == "j1" && upper_bound ? "upper_bound" : "exact"}};
    if (which == "m1") j["mode"] = "upper_bound_within_tolerance";
    if (csv) std::cout << "metric,value\n" << which << "," << value << "\n";
    else std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_integrate(const std::string& h_file, const std::string& x_file, double t, bool at_time,
                  const std::string& out_file) {
    const StepPath h = load_path(h_file);
    const StepPath x = load_path(x_file);
    if (at_time) {
        const Vec v = simple_integral_at(h, x, t);
        json j{{"t", t}, {"value", v}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    const StepPath integral = simple_integral(h, x);
    if (out_file.empty()) std::cout << path_to_json(integral).dump(2) << "\n";
    else save_path(integral, out_file);
    return 0;
}

void print_report_table(const DiagnosticsReport& report) {
    std::printf("%-8s %-28s %-16s %12s %12s %12s\n", "n", "functional", "param", "median", "mean",
                "q95");
    for (const auto& c : report.cells)
        std::printf("%-8zu %-28s %-16s %12.6g %12.6g %12.6g\n", c.n, c.functional.c_str(),
                    c.param.c_str(), c.q50, c.mean, c.q95);
    for (const auto& t : report.trends)
        std::printf("trend    %-28s %-16s verdict=%s slope=%.4g\n", t.functional.c_str(),
                    t.param.c_str(), t.verdict.c_str(), t.slope);
}

int cmd_experiment(const std::string& spec_file, const std::string& out_file, bool csv, bool table,
                   bool include_samples) {
    std::ifstream in(spec_file);
    if (!in) fail(ErrorCode::SinkError, "cannot open " + spec_file);
    json j;
    in >> j;
    const ExperimentSpec spec = ExperimentSpec::from_json(j);
    const auto t0 = std::chrono::steady_clock::now();
    const DiagnosticsReport report = run_experiment(spec);
    std::fprintf(stderr, "experiment runtime: %.1f ms\n",
                 std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count());
    if (table) {
        print_report_table(report);
        return 0;
    }
    const std::string sink = !out_file.empty() ? out_file : spec.sink;
    if (csv) {
        if (sink.empty()) std::cout << report.to_csv();
        else {
            std::ofstream out(sink);
            if (!out) fail(ErrorCode::SinkError, "cannot open " + sink);
            out << report.to_csv();
        }
        return 0;
    }
    emit(report.to_json(include_samples), sink);
    return 0;
}

int cmd_reproduce(const std::string& id, std::optional<std::size_t> n, const std::string& out_file,
                  bool table) {
    const auto ids = reproduce_ids();
    std::vector<std::string> to_run;
    if (id == "all") to_run = ids;
    else if (std::find(ids.begin(), ids.end(), id) != ids.end()) to_run = {id};
    else fail(ErrorCode::UnknownId, "unknown reproduce id: " + id);
    bool ok = true;
    for (const auto& one : to_run) {
        const ReproduceResult r = run_reproduce(one, n);
        ok = ok && r.pass();
        if (table || to_run.size() > 1) std::cout << r.table();
        else {
            json j{{"id", r.id}, {"spec_hash", r.spec_hash}, {"pass", r.pass()}};
            json cs = json::array();
            for (const auto& c : r.checks)
                cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
            j["checks"] = cs;
            j["report"] = r.report.to_json();
            std::cout << j.dump(2) << "\n";
        }
        if (!out_file.empty()) {
            std::ofstream out(to_run.size() > 1 ? out_file + "." + one + ".json" : out_file);
            if (!out) fail(ErrorCode::SinkError, "cannot open " + out_file);
            out << r.report.to_json().dump(2) << "\n";
        }
    }
    return ok ? 0 : 1;
}

int cmd_validate(const std::string& file) {
    const StepPath p = load_path(file); // constructor re-checks every invariant
    json j{{"valid", true},
           {"dim", p.dim()},
           {"horizon", p.horizon()},
           {"breakpoints", p.breakpoints().size()}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"skolab: a computational laboratory for cadlag step paths"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample a registered construction");
    std::string gen_id, gen_params, gen_component = "x", gen_out;
    std::size_t gen_n = 100;
    std::uint64_t gen_seed = 0, gen_replica = 0;
    gen->add_option("construction", gen_id, "construction id")->required();
    gen->add_option("--n", gen_n, "scale index");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--replica", gen_replica, "replica index");
    gen->add_option("--params", gen_params, "JSON parameter object");
    gen->add_option("--component", gen_component, "x | h | m | a | count");
    gen->add_option("-o,--output", gen_out, "output file (.json or .csv)");

    // metric
    auto* met = app.add_subcommand("metric", "distance between two path files");
    std::string met_kind, met_a, met_b;
    double met_T = 0.0, met_tol = 1e-6;
    bool met_ub = false, met_csv = false;
    met->add_option("kind", met_kind, "uniform | j1 | m1 | halfline")->required();
    met->add_option("a", met_a, "first path file")->required();
    met->add_option("b", met_b, "second path file")->required();
    met->add_option("--T", met_T, "compare on [0, T] (default: min horizon)");
    met->add_option("--tol", met_tol, "tolerance for approximate infima");
    met->add_flag("--upper-bound", met_ub, "J1 grid-search upper bound instead of the exact DP");
    met->add_flag("--csv", met_csv, "CSV output");
    std::string met_base = "uniform";
    met->add_option("--base", met_base, "half-line base metric: uniform | j1 | m1");

    // integrate
    auto* intg = app.add_subcommand("integrate", "simple integral of h(s-) against x");
    std::string int_h, int_x, int_out;
    double int_t = 0.0;
    bool int_at = false;
    intg->add_option("integrand", int_h, "integrand path file")->required();
    intg->add_option("integrator", int_x, "integrator path file")->required();
    intg->add_option("--t", int_t, "evaluate at a single time")->each([&](const std::string&) {
        int_at = true;
    });
    intg->add_option("-o,--output", int_out, "output file for the integral path");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run an experiment spec file");
    std::string exp_spec, exp_out;
    bool exp_csv = false, exp_samples = false;
    exp->add_option("spec", exp_spec, "spec JSON file")->required();
    exp->add_option("-o,--output", exp_out, "report file");
    exp->add_flag("--csv", exp_csv, "long-format CSV report");
    bool exp_table = false;
    exp->add_flag("--table", exp_table, "human table output");
    exp->add_flag("--samples", exp_samples, "include raw replica samples");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "run a pinned example and check expectations");
    std::string rep_id, rep_out;
    std::int64_t rep_n = -1;
    bool rep_table = false;
    rep->add_option("id", rep_id, "registry id or 'all'")->required();
    rep->add_option("--n", rep_n, "restrict to one scale index");
    rep->add_option("-o,--output", rep_out, "write the report JSON here");
    rep->add_flag("--table", rep_table, "human table output");

    // validate
    auto* val = app.add_subcommand("validate", "check a path file's invariants");
    std::string val_file;
    val->add_option("file", val_file, "path file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_id, gen_n, gen_seed, gen_replica, gen_params, gen_component, gen_out);
        if (met->parsed()) return cmd_metric(met_kind, met_a, met_b, met_T, met_tol, met_ub, met_csv, met_base);
        if (intg->parsed()) return cmd_integrate(int_h, int_x, int_t, int_at, int_out);
        if (exp->parsed()) return cmd_experiment(exp_spec, exp_out, exp_csv, exp_table, exp_samples);
        if (rep->parsed())
            return cmd_reproduce(rep_id,
                                 rep_n >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(rep_n))
                                            : std::nullopt,
                                 rep_out, rep_table);
        if (val->parsed()) return cmd_validate(val_file);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
