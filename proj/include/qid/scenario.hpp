#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qid/levy_khinchine.hpp"
#include "qid/piecewise_bv.hpp"

namespace qid {

/// Declarative description of a sequence of spectral pairs (or plain BV
/// functions): a builtin family with parameters, or an explicit list.
struct ScenarioSpec {
    std::string family;                       // example1..example4, atom_drift,
                                              // qid_ratio, poisson, custom
    std::map<std::string, double> params;
    std::vector<long long> indices;           // nonempty, strictly increasing
    double tau = 1.0;
    std::vector<SpectralPair> explicit_pairs; // required when family == "custom"

    bool operator==(const ScenarioSpec&) const = default;
};

const std::vector<std::string>& builtin_families();

/// Default geometric index ladder 1, 2, 4, ..., 256.
std::vector<long long> default_indices();

/// Realize the scenario as spectral pairs, one per index (Examples 1-4 get
/// gamma = 0). Throws ParseError on invalid specs.
std::vector<SpectralPair> realize(const ScenarioSpec& spec);

/// The n-th member of a builtin family.
SpectralPair realize_member(const ScenarioSpec& spec, long long n);

/// Spectral functions only.
std::vector<PiecewiseBV> realize_bv(const ScenarioSpec& spec);

/// JSON (de)serialization. The schema has a mandatory version field and
/// rejects unknown keys; parse errors carry the offending field or position.
ScenarioSpec parse_scenario(const std::string& text);
std::string serialize_scenario(const ScenarioSpec& spec);

ScenarioSpec load_scenario_file(const std::string& path);

}  // namespace qid
