#include "qid/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qid/errors.hpp"

namespace qid {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError("scenario: " + where + ": " + what);
}

double get_param(const ScenarioSpec& spec, const std::string& name, double fallback) {
    const auto it = spec.params.find(name);
    return it == spec.params.end() ? fallback : it->second;
}

void check_indices(const std::vector<long long>& indices) {
    if (indices.empty()) fail("indices", "must be nonempty");
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 1) fail("indices", "entries must be >= 1");
        if (i > 0 && indices[i] <= indices[i - 1]) {
            fail("indices", "must be strictly increasing");
        }
    }
}

}  // namespace

const std::vector<std::string>& builtin_families() {
    static const std::vector<std::string> families{"example1", "example2", "example3",
                                                   "example4", "atom_drift", "qid_ratio",
                                                   "poisson", "custom"};
    return families;
}

std::vector<long long> default_indices() {
    std::vector<long long> idx;
    for (long long n = 1; n <= 256; n *= 2) idx.push_back(n);
    return idx;
}

SpectralPair realize_member(const ScenarioSpec& spec, long long n) {
    const double tau = spec.tau;
    const double nd = static_cast<double>(n);
    if (spec.family == "example1") {
        // G_n = 1_{[n,inf)} - 1_{[n+1,inf)}
        return {0.0, PiecewiseBV({{nd, 1.0}, {nd + 1.0, -1.0}}, {}), tau};
    }
    if (spec.family == "example2") {
        // G_n = n 1_{[0,inf)} - n 1_{[1/n^2,inf)}
        return {0.0, PiecewiseBV({{0.0, nd}, {1.0 / (nd * nd), -nd}}, {}), tau};
    }
    if (spec.family == "example3") {
        // dyadic window: a_n = (n - 2^k)/2^k, b_n = (n + 1 - 2^k)/2^k
        const int k = std::bit_width(static_cast<unsigned long long>(n)) - 1;
        const double p = static_cast<double>(1ULL << k);
        const double a = (nd - p) / p;
        const double b = (nd + 1.0 - p) / p;
        return {0.0, PiecewiseBV({{a, 1.0}, {b, -1.0}}, {}), tau};
    }
    if (spec.family == "example4") {
        // continuous ramp from 0 to 2 across [-n, n]
        return {0.0, PiecewiseBV({}, {{-nd, nd, 1.0 / nd}}), tau};
    }
    if (spec.family == "atom_drift") {
        const double weight = get_param(spec, "weight", 0.5);
        const double x0 = get_param(spec, "x0", 1.0);
        return {1.0 / nd, PiecewiseBV({{x0 + 1.0 / nd, weight}}, {}), tau};
    }
    if (spec.family == "qid_ratio") {
        const double lambda1 = get_param(spec, "lambda1", 1.0);
        const double lambda2 = get_param(spec, "lambda2", 0.2);
        return compound_poisson_pair({{1.0, lambda1}, {2.0, -lambda2}}, tau);
    }
    if (spec.family == "poisson") {
        const double lambda = get_param(spec, "lambda", 1.0);
        const double x0 = get_param(spec, "x0", 1.0);
        return compound_poisson_pair({{x0, lambda}}, tau);
    }
    fail("family", "unknown family '" + spec.family + "'");
}

std::vector<SpectralPair> realize(const ScenarioSpec& spec) {
    check_indices(spec.indices);
    if (spec.family == "custom") {
        if (spec.explicit_pairs.empty()) fail("explicit", "family=custom requires explicit pairs");
        return spec.explicit_pairs;
    }
    std::vector<SpectralPair> out;
    out.reserve(spec.indices.size());
    for (long long n : spec.indices) out.push_back(realize_member(spec, n));
    return out;
}

std::vector<PiecewiseBV> realize_bv(const ScenarioSpec& spec) {
    std::vector<PiecewiseBV> out;
    for (const SpectralPair& pair : realize(spec)) out.push_back(pair.g);
    return out;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) fail(where, "unknown field '" + key + "'");
    }
}

PiecewiseBV parse_bv(const json& entry, const std::string& where) {
    std::vector<Atom> atoms;
    std::vector<Segment> segments;
    if (entry.contains("atoms")) {
        if (!entry["atoms"].is_array()) fail(where + ".atoms", "expected a list");
        for (std::size_t i = 0; i < entry["atoms"].size(); ++i) {
            const json& a = entry["atoms"][i];
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                std::ostringstream os;
                os << where << ".atoms[" << i << "]";
                fail(os.str(), "expected [location, weight]");
            }
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
    }
    if (entry.contains("segments")) {
        if (!entry["segments"].is_array()) fail(where + ".segments", "expected a list");
        for (std::size_t i = 0; i < entry["segments"].size(); ++i) {
            const json& s = entry["segments"][i];
            if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() ||
                !s[2].is_number()) {
                std::ostringstream os;
                os << where << ".segments[" << i << "]";
                fail(os.str(), "expected [left, right, slope]");
            }
            segments.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
        }
    }
    try {
        return PiecewiseBV(std::move(atoms), std::move(segments));
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("json", e.what());
    }
    if (!doc.is_object()) fail("document", "expected a JSON object");
    reject_unknown_keys(doc, {"schema", "family", "params", "indices", "tau", "explicit"},
                        "document");

    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != kSchemaVersion) {
        fail("schema", "missing or unsupported schema version (expected 1)");
    }
    ScenarioSpec spec;
    if (!doc.contains("family") || !doc["family"].is_string()) {
        fail("family", "missing family name");
    }
    spec.family = doc["family"].get<std::string>();
    const auto& families = builtin_families();
    if (std::find(families.begin(), families.end(), spec.family) == families.end()) {
        fail("family", "unknown family '" + spec.family + "'");
    }

    if (doc.contains("params")) {
        if (!doc["params"].is_object()) fail("params", "expected an object of numbers");
        for (const auto& [key, value] : doc["params"].items()) {
            if (!value.is_number()) fail("params." + key, "expected a number");
            spec.params[key] = value.get<double>();
        }
    }

    if (doc.contains("indices")) {
        if (!doc["indices"].is_array()) fail("indices", "expected a list of integers");
        for (std::size_t i = 0; i < doc["indices"].size(); ++i) {
            if (!doc["indices"][i].is_number_integer()) {
                std::ostringstream os;
                os << "indices[" << i << "]";
                fail(os.str(), "expected an integer");
            }
            spec.indices.push_back(doc["indices"][i].get<long long>());
        }
    } else {
        spec.indices = default_indices();
    }
    check_indices(spec.indices);

    if (doc.contains("tau")) {
        if (!doc["tau"].is_number() || !(doc["tau"].get<double>() > 0.0)) {
            fail("tau", "expected a positive number");
        }
        spec.tau = doc["tau"].get<double>();
    }

    if (doc.contains("explicit")) {
        if (!doc["explicit"].is_array()) fail("explicit", "expected a list of pairs");
        for (std::size_t i = 0; i < doc["explicit"].size(); ++i) {
            std::ostringstream os;
            os << "explicit[" << i << "]";
            const std::string where = os.str();
            const json& entry = doc["explicit"][i];
            if (!entry.is_object()) fail(where, "expected an object");
            reject_unknown_keys(entry, {"gamma", "tau", "atoms", "segments"}, where);
            SpectralPair pair;
            if (entry.contains("gamma")) {
                if (!entry["gamma"].is_number()) fail(where + ".gamma", "expected a number");
                pair.gamma = entry["gamma"].get<double>();
            }
            pair.tau = spec.tau;
            if (entry.contains("tau")) {
                if (!entry["tau"].is_number() || !(entry["tau"].get<double>() > 0.0)) {
                    fail(where + ".tau", "expected a positive number");
                }
                pair.tau = entry["tau"].get<double>();
            }
            pair.g = parse_bv(entry, where);
            spec.explicit_pairs.push_back(std::move(pair));
        }
    }
    if (spec.family == "custom" && spec.explicit_pairs.empty()) {
        fail("explicit", "family=custom requires explicit pairs");
    }
    return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["family"] = spec.family;
    if (!spec.params.empty()) {
        json params = json::object();
        for (const auto& [key, value] : spec.params) params[key] = value;
        doc["params"] = params;
    }
    doc["indices"] = spec.indices;
    doc["tau"] = spec.tau;
    if (!spec.explicit_pairs.empty()) {
        json list = json::array();
        for (const SpectralPair& pair : spec.explicit_pairs) {
            json entry;
            entry["gamma"] = pair.gamma;
            entry["tau"] = pair.tau;
            json atoms = json::array();
            for (const Atom& a : pair.g.atoms()) atoms.push_back({a.location, a.weight});
            json segments = json::array();
            for (const Segment& s : pair.g.segments()) segments.push_back({s.left, s.right, s.slope});
            if (!atoms.empty()) entry["atoms"] = atoms;
            if (!segments.empty()) entry["segments"] = segments;
            list.push_back(entry);
        }
        doc["explicit"] = list;
    }
    return doc.dump(2) + "\n";
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("scenario: cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

}  // namespace qid
