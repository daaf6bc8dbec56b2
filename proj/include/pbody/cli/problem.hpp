#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbody/geometry/cone.hpp"
#include "pbody/psystem/psystem.hpp"

namespace pbody::cli {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "pbody";
inline constexpr const char* kToolVersion = "1.0.0";

struct Options {
    std::uint64_t mc_samples = 1'000'000;
    std::optional<std::int64_t> saturation_bound;
    int qo_max_e = 4;
    int positivity_e_max = 6;
    int validate_e_max = 6;
    int intersection_e_max = 6;
    std::int64_t intersection_c = 3;
    std::optional<IntVec> shift_w;
    std::optional<Rat> shift_lambda;
    std::optional<Rat> hilbert_search_bound;

    friend bool operator==(const Options&, const Options&) = default;
};

/// A problem file with every default resolved. Vectors are in ambient
/// coordinates exactly as written; resolve() applies the lattice change.
struct ProblemSpec {
    int dimension = 0;
    int prime = 0;
    bool cone_by_normals = false;
    std::vector<IntVec> cone_vectors;
    std::optional<std::vector<IntVec>> lattice;
    std::optional<Json> family;
    std::optional<Json> family2;
    std::optional<std::vector<IntVec>> m_generators;
    std::vector<std::string> tasks;
    int e_max = 8;
    std::optional<IntVec> truncation_vector;
    Rat truncation_bound = 1;
    Options options;
    std::uint64_t seed = 0;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Compute objects built from a spec.
struct Resolved {
    geometry::Cone cone;
    geometry::LatticeTransform transform;
    std::optional<psystem::PSystem> family;
    std::optional<psystem::PSystem> family2;
    std::optional<std::vector<IntVec>> m_generators;
    geometry::TruncatingHalfspace truncation;
    std::optional<IntVec> shift_w;
};

/// ParseError for malformed JSON or wrong field types; ValidationError(field)
/// for semantic problems.
ProblemSpec parse_problem(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec parse_problem_json(const Json& j);

/// Canonical JSON: all defaults written, rationals as strings.
Json canonical_json(const ProblemSpec& spec);

Resolved resolve(const ProblemSpec& spec);

bool is_prime(std::int64_t n);

}  // namespace pbody::cli
