// Benchmark: serial reference vs OpenMP replica loop on a representative
// experiment, verifying that both produce byte-identical reports.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "skolab/experiment.hpp"

using namespace skolab;
using Clock = std::chrono::steady_clock;

namespace {

double run_ms(const ExperimentSpec& spec, bool parallel, std::string& dump) {
    const auto t0 = Clock::now();
    const DiagnosticsReport rep = run_experiment(spec, parallel);
    const auto t1 = Clock::now();
    dump = rep.to_json(true).dump();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t replicas = 200;
    if (argc > 1) replicas = static_cast<std::size_t>(std::atoll(argv[1]));

    ExperimentSpec spec;
    spec.construction = "exploding_pair";
    spec.params = {{"alpha", 1.5}, {"epsilon", 0.25}, {"x_min", 1.0}, {"T", 1.0}};
    spec.n_grid = {1000, 10000};
    spec.replicas = replicas;
    spec.seed = 7;
    FunctionalSpec f;
    f.kind = "integral_at";
    f.t = 1.0;
    spec.functionals = {f};

    std::string serial_dump, parallel_dump;
    const double serial_ms = run_ms(spec, false, serial_dump);
    const double parallel_ms = run_ms(spec, true, parallel_dump);

    std::printf("replicas            %zu\n", replicas);
    std::printf("threads             %zu\n", effective_threads());
    std::printf("serial reference    %10.1f ms\n", serial_ms);
    std::printf("openmp replica loop %10.1f ms\n", parallel_ms);
    std::printf("speedup             %10.2fx\n", serial_ms / parallel_ms);
    const bool identical = serial_dump == parallel_dump;
    std::printf("reports identical   %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
