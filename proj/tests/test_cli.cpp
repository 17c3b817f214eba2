#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"
#include "skolab/path_io.hpp"

namespace {

std::string g_bin;
std::string g_dir;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_bin + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string path_file(const std::string& name, const std::string& content) {
    const std::string file = g_dir + "/" + name;
    std::ofstream out(file);
    out << content;
    return file;
}

} // namespace

TEST_CASE("validate") {
    const std::string good = path_file(
        "good.json", R"({"dim":1,"horizon":2.0,"breakpoints":[0.0,1.0],"values":[[0.0],[1.0]]})");
    CHECK(run("validate " + good).exit_code == 0);

    const std::string bad = path_file(
        "bad.json", R"({"dim":1,"horizon":1.0,"breakpoints":[0.0,0.5,0.25],"values":[[0],[1],[2]]})");
    CHECK(run("validate " + bad).exit_code == 1);

    CHECK(run("validate /no/such/file.json").exit_code == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("metric j1").exit_code == 2);
    CHECK(run("").exit_code == 2);
}

TEST_CASE("metric subcommand") {
    const std::string a = path_file(
        "a.json", R"({"dim":1,"horizon":2.0,"breakpoints":[0.0,1.0],"values":[[0.0],[1.0]]})");
    const RunResult same = run("metric uniform " + a + " " + a);
    CHECK(same.exit_code == 0);
    CHECK(nlohmann::json::parse(same.out).at("value").get<double>() == 0.0);

    const std::string b = path_file(
        "b.json", R"({"dim":1,"horizon":2.0,"breakpoints":[0.0,1.1],"values":[[0.0],[1.0]]})");
    const RunResult j1 = run("metric j1 " + a + " " + b + " --T 2");
    CHECK(j1.exit_code == 0);
    CHECK(nlohmann::json::parse(j1.out).at("value").get<double>() == doctest::Approx(0.1));

    CHECK(run("metric bogus " + a + " " + b).exit_code == 1);
}

TEST_CASE("generate, integrate, round trip") {
    const std::string h = g_dir + "/h.json";
    const std::string x = g_dir + "/x.json";
    CHECK(run("generate sawtooth --n 4 --component h -o " + h).exit_code == 0);
    CHECK(run("generate sawtooth --n 4 --component x -o " + x).exit_code == 0);
    CHECK(run("validate " + h).exit_code == 0);

    const RunResult at = run("integrate " + h + " " + x + " --t 1.0");
    CHECK(at.exit_code == 0);
    CHECK(nlohmann::json::parse(at.out).at("value")[0].get<double>() == doctest::Approx(1.0));

    // full-path output is valid path JSON
    const RunResult full = run("integrate " + h + " " + x);
    CHECK(full.exit_code == 0);
    CHECK_NOTHROW(skolab::path_from_json(nlohmann::json::parse(full.out)));

    CHECK(run("generate mystery --n 4").exit_code == 1);
}

TEST_CASE("experiment subcommand") {
    const std::string spec = path_file("spec.json", R"({
        "construction": {"id": "sawtooth"},
        "n_grid": [4, 16, 64],
        "replicas": 1,
        "functionals": [{"kind": "integral_at", "t": 1.0}],
        "seed": 5
    })");
    const std::string out = g_dir + "/report.json";
    CHECK(run("experiment " + spec + " -o " + out).exit_code == 0);
    std::ifstream in(out);
    nlohmann::json rep;
    in >> rep;
    CHECK(rep.at("meta").at("replicas").get<std::size_t>() == 1);
    CHECK(rep.at("cells").size() == 3);
    // sawtooth integral medians 1, 2, 4: fitted log-log slope 1/2
    CHECK(rep.at("trends")[0].at("slope").get<double>() == doctest::Approx(0.5).epsilon(1e-9));

    const RunResult csv = run("experiment " + spec + " --csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("n,param,functional,stat,value,lo,hi", 0) == 0);
}

TEST_CASE("reproduce with a narrowed grid") {
    const RunResult r = run("reproduce sawtooth --n 4 --table");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("RESULT PASS") != std::string::npos);
    CHECK(r.out.find("spec ") != std::string::npos);
    CHECK(run("reproduce no-such-example").exit_code == 1);
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (!arg.empty() && arg[0] != '-') g_bin = arg;
    }
    if (g_bin.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-skolab-binary>\n");
        return 2;
    }
    char tmpl[] = "/tmp/skolab_cli_XXXXXX";
    g_dir = mkdtemp(tmpl);
    return ctx.run();
}
