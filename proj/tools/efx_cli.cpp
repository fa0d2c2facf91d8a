#include "CLI11.hpp"

#include "efx/allocators.hpp"
#include "efx/envy_graph.hpp"
#include "efx/errors.hpp"
#include "efx/generators.hpp"
#include "efx/json_io.hpp"
#include "efx/model.hpp"
#include "efx/rational.hpp"
#include "efx/trace.hpp"
#include "efx/verification.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace efx;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

// Exit-3 runs must leave a reproducible bug report on disk: the instance, the
// trace up to the failure (possibly empty when the engine threw before
// returning one), and the message.
std::string writeCrashArtifacts(const std::string& tag, const std::string& instanceJson,
                                const RunTrace& trace, const std::string& message) {
    const char* env = std::getenv("EFX_CRASH_DIR");
    const std::filesystem::path dir = env && *env ? env : "crash";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto stem = dir / tag;
    io::writeFile((stem.string() + "-instance.json"), instanceJson);
    io::writeFile((stem.string() + "-trace.jsonl"), traceToJsonLines(trace));
    io::writeFile((stem.string() + "-message.txt"), message + "\n");
    return stem.string() + "-{instance.json,trace.jsonl,message.txt}";
}

struct AllocateArgs {
    std::string algo;
    std::string input;
    std::string output;
    std::string tracePath;
    bool debug = false;
};

int cmdAllocate(const AllocateArgs& a) {
    const std::string text = io::readFile(a.input);
    const auto parsed = io::parseInstanceText(text);
    const auto mode = a.debug ? engines::EngineMode::Debug : engines::EngineMode::Fast;

    allocators::AllocatorResult res;
    std::string caseLabel;
    try {
        if (a.algo == "multigraph") {
            require(parsed.multigraph.has_value(), "allocate --algo multigraph needs a multigraph instance");
            res = allocators::multigraphAllocate(*parsed.multigraph, mode);
        } else if (a.algo == "few-agents") {
            res = allocators::fewAgentsAllocate(parsed.base, mode);
        } else {
            require(parsed.threeValue.has_value(), "allocate --algo three-values needs a three-value instance");
            caseLabel = allocators::caseName(allocators::classify(parsed.threeValue->b, parsed.threeValue->c));
            res = allocators::threeValuesAllocate(*parsed.threeValue, mode);
        }
    } catch (const InternalInvariantError& e) {
        const auto where = writeCrashArtifacts("allocate", text, RunTrace{}, e.what());
        std::cerr << "internal invariant violated: " << e.what() << "\n"
                  << "bug report written to " << where << "\n";
        return kExitInternalError;
    }

    // The certificate is recomputed here from the written allocation, not
    // taken from the allocator's bookkeeping.
    const auto report = parsed.threeValue
                            ? verification::fullReport(*parsed.threeValue, res.alloc)
                            : verification::fullReport(parsed.base, res.alloc);
    io::writeFile(a.output, io::allocationToJsonText(res.alloc));
    if (!a.tracePath.empty()) io::writeFile(a.tracePath, traceToJsonLines(res.trace));

    std::cout << io::reportToJsonText(report) << "\n";
    std::cerr << "engine " << res.engineName
              << (caseLabel.empty() ? "" : " (" + caseLabel + ")")
              << ", " << res.engineIterations << " iterations\n";

    if (!report.complete || !report.alpha.atLeast(Value(2, 3))) {
        const auto where = writeCrashArtifacts("allocate", text, res.trace,
                                               "independent certificate failed after allocator success");
        std::cerr << "certificate failed; bug report written to " << where << "\n";
        return kExitInternalError;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string input;
    std::string allocation;
    std::string alpha = "2/3";
    std::vector<std::string> checks{"efx"};
    std::string dotPath;
    std::string dotKind = "plain";
};

graphs::GraphKind parseGraphKind(const std::string& s) {
    if (s == "plain") return graphs::GraphKind::Plain;
    if (s == "reduced") return graphs::GraphKind::Reduced;
    if (s == "enhanced") return graphs::GraphKind::Enhanced;
    if (s == "reduced-plus") return graphs::GraphKind::ReducedPlus;
    if (s == "enhanced-plus") return graphs::GraphKind::EnhancedPlus;
    if (s == "doubly-enhanced") return graphs::GraphKind::DoublyEnhanced;
    throw InputError("unknown graph kind: " + s);
}

int cmdVerify(const VerifyArgs& a) {
    const auto parsed = io::parseInstanceText(io::readFile(a.input));
    const auto alloc = io::parseAllocationText(io::readFile(a.allocation), parsed.base);
    const Value threshold = parseValue(a.alpha);

    const auto report = parsed.threeValue ? verification::fullReport(*parsed.threeValue, alloc)
                                          : verification::fullReport(parsed.base, alloc);

    if (!a.dotPath.empty()) {
        const auto kind = parseGraphKind(a.dotKind);
        std::optional<graphs::ThreeValueParams> params;
        if (parsed.threeValue) params = graphs::ThreeValueParams{parsed.threeValue->b, parsed.threeValue->c};
        if (kind == graphs::GraphKind::EnhancedPlus || kind == graphs::GraphKind::DoublyEnhanced)
            require(params.has_value(), a.dotKind + " graphs need a three-value instance");
        io::writeFile(a.dotPath, graphs::toDot(graphs::buildGraph(parsed.base, alloc, kind, params)));
    }

    std::cout << io::reportToJsonText(report) << "\n";

    bool pass = true;
    for (const auto& check : a.checks) {
        if (check == "efx") {
            pass = pass && report.alpha.atLeast(threshold);
        } else if (check == "critical") {
            for (const auto& list : report.critical) pass = pass && list.empty();
        } else if (check == "props") {
            pass = pass && report.properties.allAtoE();
        } else if (check == "propsF") {
            require(parsed.threeValue.has_value(), "check propsF needs a three-value instance");
            pass = pass && report.properties.f1.value_or(false) && report.properties.f2.value_or(false);
        } else {
            throw InputError("unknown check: " + check);
        }
    }
    return pass ? kExitOk : kExitVerifyFailed;
}

struct FuzzArgs {
    std::string family;
    std::string tvCase; // "", "1", "2", "3", "3zero"
    int nMin = 2, nMax = 4;
    int mMin = 3, mMax = 10;
    std::int64_t seeds = 100;
    std::uint64_t seedBase = 0;
    int jobs = 1;
    std::string report = "-";
    bool debug = false;
};

struct FuzzRow {
    std::string csv;
    bool pass = false;
    // Set when the run died on an internal invariant; handled after the join.
    std::optional<std::string> crashMessage;
    // Set when generation/allocation rejected its input (bad campaign setup).
    std::optional<std::string> inputError;
    std::string instanceJson;
    RunTrace trace;
};

void runFuzzSeed(const FuzzArgs& a, std::uint64_t seed, FuzzRow& row) {
    gen::GenSpec spec;
    spec.seed = seed;
    // Sizes come from a separate stream so instance bytes depend only on the
    // seed, not on the size ranges the campaign happened to use.
    gen::SplitMix64 sizeRng(seed ^ 0x5eedc0deULL);
    spec.n = sizeRng.intIn(a.nMin, a.nMax);
    spec.m = sizeRng.intIn(a.mMin, a.mMax);

    std::string caseLabel = "-";
    const auto mode = a.debug ? engines::EngineMode::Debug : engines::EngineMode::Fast;

    allocators::AllocatorResult res;
    Instance base;
    std::optional<ThreeValueInstance> tv;
    try {
        if (a.family == "multigraph") {
            spec.family = gen::Family::Multigraph;
            const auto mg = gen::genMultigraph(spec);
            row.instanceJson = io::instanceToJsonText(mg);
            base = mg.toInstance();
            res = allocators::multigraphAllocate(mg, mode);
        } else if (a.family == "additive") {
            spec.family = gen::Family::Additive;
            base = gen::genAdditive(spec);
            row.instanceJson = io::instanceToJsonText(base);
            res = allocators::fewAgentsAllocate(base, mode);
        } else {
            spec.family = gen::Family::ThreeValue;
            if (a.tvCase == "1") spec.tvCase = allocators::ThreeValueCase::Case1;
            else if (a.tvCase == "2") spec.tvCase = allocators::ThreeValueCase::Case2;
            else if (a.tvCase == "3") spec.tvCase = allocators::ThreeValueCase::Case3;
            else if (a.tvCase == "3zero") spec.forceZeroC = true;
            tv = gen::genThreeValue(spec);
            row.instanceJson = io::instanceToJsonText(*tv);
            base = tv->toInstance();
            caseLabel = allocators::caseName(allocators::classify(tv->b, tv->c));
            res = allocators::threeValuesAllocate(*tv, mode);
        }
    } catch (const InternalInvariantError& e) {
        row.crashMessage = e.what();
        return;
    } catch (const InputError& e) {
        row.inputError = e.what();
        return;
    }

    row.trace = res.trace;
    const auto report = tv ? verification::fullReport(*tv, res.alloc)
                           : verification::fullReport(base, res.alloc);
    row.pass = report.complete && report.alpha.atLeast(Value(2, 3));

    std::ostringstream line;
    line << seed << ',' << a.family << ',' << caseLabel << ',' << spec.n << ',' << spec.m << ','
         << res.engineName << ',' << res.engineIterations << ','
         << (report.alpha.unbounded ? std::string("unbounded") : formatValue(report.alpha.alpha))
         << ',' << (row.pass ? 1 : 0);
    row.csv = line.str();
}

int cmdFuzz(const FuzzArgs& a) {
    require(a.nMin >= 1 && a.nMin <= a.nMax, "bad n range");
    require(a.mMin >= 1 && a.mMin <= a.mMax, "bad m range");
    require(a.seeds >= 1, "need at least one seed");
    require(a.jobs >= 1, "need at least one job");
    if (a.family == "multigraph") require(a.nMin >= 2, "multigraph instances need n >= 2");
    else if (a.family == "additive") require(a.nMax <= 7, "the few-agents allocator caps n at 7");
    else require(a.family == "three-value", "unknown family: " + a.family);

    std::vector<FuzzRow> rows(static_cast<std::size_t>(a.seeds));
    const int workers = static_cast<int>(std::min<std::int64_t>(a.jobs, a.seeds));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t s = w; s < a.seeds; s += workers)
                runFuzzSeed(a, a.seedBase + static_cast<std::uint64_t>(s), rows[static_cast<std::size_t>(s)]);
        });
    }
    for (auto& t : pool) t.join();

    for (std::int64_t s = 0; s < a.seeds; ++s) {
        const auto& row = rows[static_cast<std::size_t>(s)];
        const auto seed = a.seedBase + static_cast<std::uint64_t>(s);
        if (row.inputError) {
            std::cerr << "input error at seed " << seed << ": " << *row.inputError << "\n";
            return kExitInputError;
        }
        if (!row.crashMessage) continue;
        const auto where = writeCrashArtifacts("fuzz-seed-" + std::to_string(seed), row.instanceJson,
                                               row.trace, *row.crashMessage);
        std::cerr << "internal invariant violated at seed " << seed << ": " << *row.crashMessage
                  << "\nbug report written to " << where << "\n";
        return kExitInternalError;
    }

    std::ostringstream csv;
    csv << "seed,family,case,n,m,algo,iterations,alpha,pass\n";
    bool allPass = true;
    for (const auto& row : rows) {
        csv << row.csv << "\n";
        allPass = allPass && row.pass;
    }
    if (a.report == "-") std::cout << csv.str();
    else io::writeFile(a.report, csv.str());
    std::cerr << (allPass ? "all" : "NOT all") << " " << a.seeds << " runs passed\n";
    return allPass ? kExitOk : kExitVerifyFailed;
}

struct OracleArgs {
    std::string input;
    std::optional<int> maxBundleSize;
    bool complete = false;
    std::string filter; // "" or "efx23-nocritical"
};

int cmdOracle(const OracleArgs& a) {
    const auto parsed = io::parseInstanceText(io::readFile(a.input));
    std::function<bool(const Instance&, const PartialAllocation&)> filter;
    if (a.filter == "efx23-nocritical") {
        filter = [](const Instance& inst, const PartialAllocation& alloc) {
            if (!verification::maxAlphaEfx(inst, alloc).atLeast(Value(2, 3))) return false;
            for (const auto& list : verification::criticalGoods(inst, alloc))
                if (!list.empty()) return false;
            return true;
        };
    } else {
        require(a.filter.empty(), "unknown filter: " + a.filter);
    }

    const auto result =
        verification::bruteForceBestAlpha(parsed.base, a.maxBundleSize, a.complete, filter);
    if (!result.feasible) {
        std::cout << "none exists\n";
        return kExitOk;
    }
    if (result.unbounded) std::cout << "best alpha: unbounded\n";
    else std::cout << "best alpha: " << formatValue(result.bestAlpha) << "\n";
    std::cout << io::allocationToJsonText(result.witness) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2/3-EFX allocation toolkit: allocate, verify, fuzz, oracle"};
    app.require_subcommand(1);

    AllocateArgs alcArgs;
    auto* alc = app.add_subcommand("allocate", "run an allocator pipeline and certify its output");
    alc->add_option("--algo", alcArgs.algo, "multigraph | few-agents | three-values")
        ->required()
        ->check(CLI::IsMember({"multigraph", "few-agents", "three-values"}));
    alc->add_option("--input", alcArgs.input, "instance JSON path")->required();
    alc->add_option("--output", alcArgs.output, "allocation JSON output path")->required();
    alc->add_option("--trace", alcArgs.tracePath, "write the run trace as JSON-Lines here");
    alc->add_flag("--debug", alcArgs.debug, "re-check every engine invariant each iteration");

    VerifyArgs verArgs;
    auto* ver = app.add_subcommand("verify", "independently check an allocation against an instance");
    ver->add_option("--input", verArgs.input, "instance JSON path")->required();
    ver->add_option("--allocation", verArgs.allocation, "allocation JSON path")->required();
    ver->add_option("--alpha", verArgs.alpha, "EFX factor to check (rational, default 2/3)");
    ver->add_option("--checks", verArgs.checks, "subset of efx,critical,props,propsF")
        ->delimiter(',');
    ver->add_option("--dot", verArgs.dotPath, "write an envy graph in DOT format here");
    ver->add_option("--dot-kind", verArgs.dotKind,
                    "plain | reduced | enhanced | reduced-plus | enhanced-plus | doubly-enhanced");

    FuzzArgs fuzzArgs;
    auto* fuz = app.add_subcommand("fuzz", "generate seeded instances, allocate, verify; CSV report");
    fuz->add_option("--family", fuzzArgs.family, "additive | multigraph | three-value")
        ->required()
        ->check(CLI::IsMember({"additive", "multigraph", "three-value"}));
    fuz->add_option("--case", fuzzArgs.tvCase, "three-value case: 1 | 2 | 3 | 3zero")
        ->check(CLI::IsMember({"1", "2", "3", "3zero"}));
    fuz->add_option("--n-min", fuzzArgs.nMin, "minimum agent count");
    fuz->add_option("--n-max", fuzzArgs.nMax, "maximum agent count");
    fuz->add_option("--m-min", fuzzArgs.mMin, "minimum good count");
    fuz->add_option("--m-max", fuzzArgs.mMax, "maximum good count");
    fuz->add_option("--seeds", fuzzArgs.seeds, "number of seeds to run");
    fuz->add_option("--seed-base", fuzzArgs.seedBase, "first seed value");
    fuz->add_option("--jobs", fuzzArgs.jobs, "worker threads (rows stay deterministic)");
    fuz->add_option("--report", fuzzArgs.report, "CSV output path, or - for stdout");
    fuz->add_flag("--debug", fuzzArgs.debug, "run engines with full invariant re-checking");

    OracleArgs oraArgs;
    auto* ora = app.add_subcommand("oracle", "brute-force the best attainable alpha");
    ora->add_option("--input", oraArgs.input, "instance JSON path")->required();
    ora->add_option("--max-bundle-size", oraArgs.maxBundleSize, "cap bundle cardinality");
    ora->add_flag("--complete", oraArgs.complete, "only consider complete allocations");
    ora->add_option("--filter", oraArgs.filter, "efx23-nocritical: keep only 2/3-EFX, critical-free allocations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (alc->parsed()) return cmdAllocate(alcArgs);
        if (ver->parsed()) return cmdVerify(verArgs);
        if (fuz->parsed()) return cmdFuzz(fuzzArgs);
        return cmdOracle(oraArgs);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InternalInvariantError& e) {
        const auto where = writeCrashArtifacts("cli", "{}", RunTrace{}, e.what());
        std::cerr << "internal invariant violated: " << e.what() << "\n"
                  << "bug report written to " << where << "\n";
        return kExitInternalError;
    }
}
