#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efx/generators.hpp"
#include "efx/json_io.hpp"
#include "efx/model.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace efx;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

fs::path scratch() {
    static const fs::path dir = [] {
        const auto d = fs::temp_directory_path() / "efx-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path writeScratch(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    io::writeFile(p.string(), text);
    return p;
}

CliRun runCli(const std::string& args) {
    static int counter = 0;
    const fs::path outPath = scratch() / ("stdout-" + std::to_string(counter++) + ".txt");
    const std::string cmd = "EFX_CRASH_DIR=" + (scratch() / "crash").string() + " " + EFX_CLI_PATH +
                            " " + args + " > " + outPath.string() + " 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = io::readFile(outPath.string());
    return r;
}

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<std::string> splitCsv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    return cells;
}

} // namespace

TEST_CASE("allocate then verify round-trips through JSON files") {
    const auto in = writeScratch("ex1.json", io::instanceToJsonText(gen::exampleOne()));
    const auto out = scratch() / "ex1-alloc.json";
    const auto trace = scratch() / "ex1-trace.jsonl";

    const auto r = runCli("allocate --algo three-values --input " + in.string() + " --output " +
                          out.string() + " --trace " + trace.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"alpha\"") != std::string::npos);
    CHECK(r.out.find("50/31") != std::string::npos);

    const std::string traceText = io::readFile(trace.string());
    REQUIRE_FALSE(traceText.empty());
    CHECK(traceText.front() == '{');

    const auto v = runCli("verify --input " + in.string() + " --allocation " + out.string() +
                          " --checks efx,critical,props,propsF");
    CHECK(v.code == 0);

    const auto dot = scratch() / "ex1.dot";
    const auto d = runCli("verify --input " + in.string() + " --allocation " + out.string() +
                          " --dot " + dot.string() + " --dot-kind enhanced-plus");
    CHECK(d.code == 0);
    CHECK(io::readFile(dot.string()).find("digraph") != std::string::npos);
}

TEST_CASE("malformed input exits with the usage code") {
    const auto bad = writeScratch("broken.json", "{ this is not json");
    const auto r = runCli("allocate --algo three-values --input " + bad.string() +
                          " --output " + (scratch() / "never.json").string());
    CHECK(r.code == 2);
}

TEST_CASE("few-agents refuses eight agents at the CLI boundary") {
    Instance inst;
    inst.n = 8;
    inst.m = 9;
    inst.values.assign(8, std::vector<Value>(9, Value(1)));
    const auto in = writeScratch("eight.json", io::instanceToJsonText(inst));
    const auto r = runCli("allocate --algo few-agents --input " + in.string() + " --output " +
                          (scratch() / "eight-alloc.json").string());
    CHECK(r.code == 2);
}

TEST_CASE("verify applies the requested alpha threshold") {
    Instance inst;
    inst.n = 2;
    inst.m = 3;
    inst.values = {{Value(1), Value(1), Value(1)}, {Value(1), Value(1), Value(3, 4)}};
    const auto in = writeScratch("thresh.json", io::instanceToJsonText(inst));
    const auto alloc = writeScratch("thresh-alloc.json", "{\"bundles\": [[0, 1], [2]]}");

    const auto ok = runCli("verify --input " + in.string() + " --allocation " + alloc.string());
    CHECK(ok.code == 0);
    CHECK(ok.out.find("3/4") != std::string::npos);

    const auto strict = runCli("verify --input " + in.string() + " --allocation " + alloc.string() +
                               " --alpha 1");
    CHECK(strict.code == 1);
}

TEST_CASE("overlapping bundles are rejected as input errors") {
    Instance inst;
    inst.n = 2;
    inst.m = 3;
    inst.values.assign(2, std::vector<Value>(3, Value(1)));
    const auto in = writeScratch("overlap.json", io::instanceToJsonText(inst));
    const auto alloc = writeScratch("overlap-alloc.json", "{\"bundles\": [[0, 1], [1]]}");
    const auto r = runCli("verify --input " + in.string() + " --allocation " + alloc.string());
    CHECK(r.code == 2);
}

TEST_CASE("oracle refuses search spaces past the guard") {
    Instance inst;
    inst.n = 3;
    inst.m = 13;
    inst.values.assign(3, std::vector<Value>(13, Value(1)));
    const auto in = writeScratch("big.json", io::instanceToJsonText(inst));
    const auto r = runCli("oracle --input " + in.string());
    CHECK(r.code == 2);
}

TEST_CASE("oracle reports the canonical impossibility") {
    const auto in = writeScratch("ex1-oracle.json", io::instanceToJsonText(gen::exampleOne()));
    const auto r = runCli("oracle --input " + in.string() +
                          " --filter efx23-nocritical --max-bundle-size 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("none exists") != std::string::npos);
}

TEST_CASE("fuzz emits a CSV row per seed and respects the iteration bound") {
    const auto report = scratch() / "fuzz.csv";
    const auto r = runCli("fuzz --family multigraph --seeds 20 --n-min 2 --n-max 5 --m-min 6 "
                          "--m-max 12 --jobs 2 --report " + report.string());
    CHECK(r.code == 0);

    const auto lines = splitLines(io::readFile(report.string()));
    REQUIRE(lines.size() == 21);
    CHECK(lines[0] == "seed,family,case,n,m,algo,iterations,alpha,pass");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = splitCsv(lines[i]);
        REQUIRE(cells.size() == 9);
        CHECK(cells[1] == "multigraph");
        CHECK(cells[8] == "1");
        const long long n = std::stoll(cells[3]);
        const long long m = std::stoll(cells[4]);
        const long long iters = std::stoll(cells[6]);
        CHECK(n >= 2);
        CHECK(n <= 5);
        CHECK(m >= 6);
        CHECK(m <= 12);
        CHECK(iters <= n * m * m + 1);
    }
}
