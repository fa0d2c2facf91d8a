#include "efx/json_io.hpp"

#include "efx/trace.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace efx::io {

using nlohmann::json;

namespace {

Value valueFromJson(const json& j) {
    if (j.is_string()) return parseValue(j.get<std::string>());
    if (j.is_number_integer()) return Value(BigInt(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Value(BigInt(j.get<std::uint64_t>()));
    if (j.is_number_float()) {
        // Shortest round-trip text recovers the decimal the author wrote for
        // every grid value in scope; exact inputs should prefer strings.
        double d = j.get<double>();
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), d);
        return parseValue(std::string(buf, res.ptr));
    }
    throw InputError("value entries must be strings or numbers");
}

json parsed(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    require(!j.is_discarded(), "malformed JSON");
    return j;
}

int intField(const json& j, const char* name) {
    require(j.contains(name) && j[name].is_number_integer(), std::string("missing integer field \"") + name + "\"");
    return j[name].get<int>();
}

} // namespace

ParsedInstance parseInstanceText(const std::string& jsonText) {
    json j = parsed(jsonText);
    require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "instance must be an object with a \"kind\"");
    ParsedInstance out;
    out.kind = j["kind"].get<std::string>();
    int n = intField(j, "n"), m = intField(j, "m");

    if (out.kind == "additive") {
        require(j.contains("values") && j["values"].is_array(), "additive instance needs a \"values\" matrix");
        Instance inst;
        inst.n = n;
        inst.m = m;
        for (const auto& row : j["values"]) {
            require(row.is_array(), "values rows must be arrays");
            std::vector<Value> r;
            for (const auto& cell : row) r.push_back(valueFromJson(cell));
            inst.values.push_back(std::move(r));
        }
        inst.validate();
        out.base = std::move(inst);
    } else if (out.kind == "multigraph") {
        require(j.contains("edges") && j["edges"].is_array(), "multigraph instance needs an \"edges\" list");
        MultigraphInstance mg;
        mg.n = n;
        mg.m = m;
        for (const auto& e : j["edges"]) {
            require(e.is_object(), "edges must be objects");
            MultigraphInstance::Edge edge;
            edge.a = intField(e, "a");
            edge.b = intField(e, "b");
            require(e.contains("va") && e.contains("vb"), "edge needs \"va\" and \"vb\"");
            edge.va = valueFromJson(e["va"]);
            edge.vb = valueFromJson(e["vb"]);
            mg.edges.push_back(std::move(edge));
        }
        mg.validate();
        out.base = mg.toInstance();
        out.multigraph = std::move(mg);
    } else if (out.kind == "threevalue") {
        require(j.contains("b") && j.contains("c"), "three-value instance needs \"b\" and \"c\"");
        require(j.contains("labels") && j["labels"].is_array(), "three-value instance needs \"labels\"");
        ThreeValueInstance tv;
        tv.n = n;
        tv.m = m;
        tv.b = valueFromJson(j["b"]);
        tv.c = valueFromJson(j["c"]);
        for (const auto& row : j["labels"]) {
            require(row.is_string(), "labels rows must be strings");
            tv.labels.push_back(row.get<std::string>());
        }
        tv.validate();
        out.base = tv.toInstance();
        out.threeValue = std::move(tv);
    } else {
        throw InputError("unknown instance kind \"" + out.kind + "\"");
    }
    return out;
}

std::string instanceToJsonText(const Instance& inst) {
    json rows = json::array();
    for (const auto& row : inst.values) {
        json r = json::array();
        for (const auto& v : row) r.push_back(formatValue(v));
        rows.push_back(std::move(r));
    }
    json j{{"kind", "additive"}, {"n", inst.n}, {"m", inst.m}, {"values", rows}};
    return j.dump(2);
}

std::string instanceToJsonText(const MultigraphInstance& inst) {
    json edges = json::array();
    for (const auto& e : inst.edges)
        edges.push_back(json{{"a", e.a}, {"b", e.b}, {"va", formatValue(e.va)}, {"vb", formatValue(e.vb)}});
    json j{{"kind", "multigraph"}, {"n", inst.n}, {"m", inst.m}, {"edges", edges}};
    return j.dump(2);
}

std::string instanceToJsonText(const ThreeValueInstance& inst) {
    json j{{"kind", "threevalue"},
           {"n", inst.n},
           {"m", inst.m},
           {"b", formatValue(inst.b)},
           {"c", formatValue(inst.c)},
           {"labels", inst.labels}};
    return j.dump(2);
}

PartialAllocation parseAllocationText(const std::string& jsonText, const Instance& inst) {
    json j = parsed(jsonText);
    require(j.is_object() && j.contains("bundles") && j["bundles"].is_array(), "allocation must have \"bundles\"");
    PartialAllocation alloc;
    for (const auto& row : j["bundles"]) {
        require(row.is_array(), "bundles must be arrays");
        Bundle b;
        for (const auto& cell : row) {
            require(cell.is_number_integer(), "good ids must be integers");
            b.push_back(cell.get<int>());
        }
        alloc.bundles.push_back(std::move(b));
    }
    alloc.validate(inst);
    return alloc;
}

std::string allocationToJsonText(const PartialAllocation& alloc) {
    json bundles = json::array();
    for (const auto& b : alloc.bundles) bundles.push_back(b);
    return json{{"bundles", bundles}}.dump(2);
}

std::string reportToJsonText(const verification::VerifierReport& report) {
    json props{{"a", report.properties.a},
               {"b", report.properties.b},
               {"c", report.properties.c},
               {"d", report.properties.d},
               {"e", report.properties.e}};
    if (report.properties.f1) props["f1"] = *report.properties.f1;
    if (report.properties.f2) props["f2"] = *report.properties.f2;

    json critical = json::object();
    for (size_t i = 0; i < report.critical.size(); ++i)
        if (!report.critical[i].empty()) critical[std::to_string(i)] = report.critical[i];

    // Boundary conventions the numbers were computed under, so a reader never
    // has to guess which side of an inequality a borderline case fell on.
    json conventions{{"critical", "strict: 2*v(g) > v(bundle)"},
                     {"alpha", "min over ordered pairs of v_i(X_i) / (v_i(X_j) - min_g v_i(g)); pairs with zero denominator impose no bound"},
                     {"ties", "lexicographically least witness (envier, envied, removed good)"}};

    json j{{"alpha", report.alpha.unbounded ? std::string("unbounded") : formatValue(report.alpha.alpha)},
           {"properties", props},
           {"critical", critical},
           {"complete", report.complete},
           {"conventions", conventions}};
    if (report.alpha.witness) {
        j["witness"] = json{{"envier", report.alpha.witness->envier},
                            {"envied", report.alpha.witness->envied},
                            {"removedGood", report.alpha.witness->removedGood}};
    }
    return j.dump(2);
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write file: " + path);
    out << content;
}

} // namespace efx::io

namespace efx {

std::string traceToJsonLines(const RunTrace& trace) {
    std::ostringstream out;
    for (const auto& e : trace.events) {
        nlohmann::json j{{"iter", e.iter}, {"op", e.op}, {"pool", e.poolSize}, {"detail", e.detail}};
        if (!e.isStep) j["sub"] = true;
        out << j.dump() << "\n";
    }
    return out.str();
}

} // namespace efx
