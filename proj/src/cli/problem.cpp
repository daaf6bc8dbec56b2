#include "pbody/cli/problem.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pbody/error.hpp"

namespace pbody::cli {

namespace {

const std::set<std::string> kTasks = {"hk",       "fsig",     "fsig-pair",  "limit",    "colength",
                                      "eghk",     "bm",       "positivity", "validate", "hilbert-basis"};

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
    fail(ErrorKind::ParseError, field + ": " + what);
}

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
    fail(ErrorKind::ValidationError, field + ": " + reason);
}

void check_keys(const Json& j, const std::string& field, const std::set<std::string>& allowed) {
    if (!j.is_object()) parse_fail(field, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) parse_fail(field.empty() ? key : field + "." + key, "unknown field");
}

bool present(const Json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

std::int64_t get_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) parse_fail(field, "expected an integer");
    return j.get<std::int64_t>();
}

IntVec get_vec(const Json& j, const std::string& field) {
    if (!j.is_array()) parse_fail(field, "expected an array of integers");
    IntVec v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_int(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

std::vector<IntVec> get_vecs(const Json& j, const std::string& field) {
    if (!j.is_array()) parse_fail(field, "expected an array of vectors");
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_vec(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

Rat get_rat(const Json& j, const std::string& field) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (!j.is_string()) parse_fail(field, "expected a rational string \"p/q\" or an integer");
    try {
        return parse_rat(j.get<std::string>());
    } catch (const Error& e) {
        parse_fail(field, e.what());
    }
}

Json vecs_json(const std::vector<IntVec>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(v);
    return a;
}

void check_dims(const std::vector<IntVec>& vs, int d, const std::string& field) {
    for (const auto& v : vs)
        if (v.size() != static_cast<std::size_t>(d)) invalid(field, "vector " + to_string(v) + " does not have dimension " + std::to_string(d));
}

// Canonical family JSON; types are checked here, semantics in resolve().
Json canonical_family(const Json& j, const std::string& field, int d) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) parse_fail(field, "expected an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    Json out{{"kind", kind}};
    if (kind == "frobenius" || kind == "constant") {
        check_keys(j, field, {"kind", "generators"});
        if (!j.contains("generators")) parse_fail(field + ".generators", "missing");
        auto gens = get_vecs(j.at("generators"), field + ".generators");
        check_dims(gens, d, field + ".generators");
        out["generators"] = vecs_json(gens);
    } else if (kind == "fsignature") {
        check_keys(j, field, {"kind"});
    } else if (kind == "sum") {
        check_keys(j, field, {"kind", "terms"});
        if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
            parse_fail(field + ".terms", "expected a nonempty array of families");
        Json terms = Json::array();
        for (std::size_t i = 0; i < j.at("terms").size(); ++i)
            terms.push_back(canonical_family(j.at("terms")[i], field + ".terms[" + std::to_string(i) + "]", d));
        out["terms"] = terms;
    } else if (kind == "shifted") {
        check_keys(j, field, {"kind", "inner", "w", "lambda"});
        for (const char* k : {"inner", "w", "lambda"})
            if (!j.contains(k)) parse_fail(field + "." + k, "missing");
        out["inner"] = canonical_family(j.at("inner"), field + ".inner", d);
        auto w = get_vec(j.at("w"), field + ".w");
        check_dims({w}, d, field + ".w");
        out["w"] = w;
        out["lambda"] = to_string(get_rat(j.at("lambda"), field + ".lambda"));
    } else if (kind == "saturation2d") {
        check_keys(j, field, {"kind", "inner", "bound"});
        if (!j.contains("inner")) parse_fail(field + ".inner", "missing");
        out["inner"] = canonical_family(j.at("inner"), field + ".inner", d);
        out["bound"] = present(j, "bound") ? Json(get_int(j.at("bound"), field + ".bound")) : Json(nullptr);
    } else if (kind == "custom") {
        check_keys(j, field, {"kind", "generators"});
        if (!j.contains("generators") || !j.at("generators").is_array()) parse_fail(field + ".generators", "expected an array of generator lists");
        Json lists = Json::array();
        for (std::size_t i = 0; i < j.at("generators").size(); ++i) {
            auto gens = get_vecs(j.at("generators")[i], field + ".generators[" + std::to_string(i) + "]");
            check_dims(gens, d, field + ".generators");
            lists.push_back(vecs_json(gens));
        }
        out["generators"] = lists;
    } else {
        parse_fail(field + ".kind", "unknown family kind \"" + kind + "\"");
    }
    return out;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

IntVec map_primal(const geometry::LatticeTransform& t, const IntVec& v, const std::string& field) {
    try {
        return t.to_sublattice(v);
    } catch (const Error& e) {
        invalid(field, e.what());
    }
}

psystem::PSystem build_family(const Json& j, const geometry::Cone& cone, int p, const geometry::LatticeTransform& t,
                              const std::string& field) {
    using psystem::PSystem;
    const std::string kind = j.at("kind").get<std::string>();
    auto primal_list = [&](const Json& gens, const std::string& f) {
        std::vector<IntVec> out;
        for (const auto& g : gens) out.push_back(map_primal(t, g.get<IntVec>(), f));
        return out;
    };
    try {
        if (kind == "frobenius") return PSystem::frobenius(cone, p, primal_list(j.at("generators"), field + ".generators"));
        if (kind == "constant") return PSystem::constant(cone, p, primal_list(j.at("generators"), field + ".generators"));
        if (kind == "fsignature") return PSystem::fsignature(cone, p);
        if (kind == "sum") {
            std::vector<PSystem> terms;
            for (std::size_t i = 0; i < j.at("terms").size(); ++i)
                terms.push_back(build_family(j.at("terms")[i], cone, p, t, field + ".terms[" + std::to_string(i) + "]"));
            return PSystem::sum(std::move(terms));
        }
        if (kind == "shifted")
            return PSystem::shifted(build_family(j.at("inner"), cone, p, t, field + ".inner"),
                                    map_primal(t, j.at("w").get<IntVec>(), field + ".w"),
                                    parse_rat(j.at("lambda").get<std::string>()));
        if (kind == "saturation2d") {
            std::optional<std::int64_t> bound;
            if (!j.at("bound").is_null()) bound = j.at("bound").get<std::int64_t>();
            return PSystem::saturation2d(build_family(j.at("inner"), cone, p, t, field + ".inner"), bound);
        }
        std::vector<std::vector<IntVec>> lists;
        for (const auto& l : j.at("generators")) lists.push_back(primal_list(l, field + ".generators"));
        return PSystem::custom(cone, p, std::move(lists));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        invalid(field, e.what());
    }
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

ProblemSpec parse_problem_json(const Json& j) {
    check_keys(j, "", {"dimension", "prime", "cone", "lattice", "family", "family2", "m_generators", "tasks", "e_max",
                       "truncation", "options", "seed"});
    ProblemSpec spec;
    for (const char* k : {"dimension", "prime", "cone", "tasks"})
        if (!j.contains(k)) parse_fail(k, "missing");

    const std::int64_t d = get_int(j.at("dimension"), "dimension");
    if (d < 1 || d > static_cast<std::int64_t>(kMaxDim)) invalid("dimension", "must be between 1 and " + std::to_string(kMaxDim));
    spec.dimension = static_cast<int>(d);
    const std::int64_t p = get_int(j.at("prime"), "prime");
    if (!is_prime(p) || p > 1'000'003) invalid("prime", std::to_string(p) + " is not a prime");
    spec.prime = static_cast<int>(p);

    const Json& cone = j.at("cone");
    check_keys(cone, "cone", {"rays", "normals"});
    if (cone.contains("rays") == cone.contains("normals")) parse_fail("cone", "give exactly one of \"rays\" or \"normals\"");
    spec.cone_by_normals = cone.contains("normals");
    spec.cone_vectors = get_vecs(spec.cone_by_normals ? cone.at("normals") : cone.at("rays"), spec.cone_by_normals ? "cone.normals" : "cone.rays");
    check_dims(spec.cone_vectors, spec.dimension, "cone");

    if (present(j, "lattice")) {
        spec.lattice = get_vecs(j.at("lattice"), "lattice");
        check_dims(*spec.lattice, spec.dimension, "lattice");
        if (spec.lattice->size() != static_cast<std::size_t>(d)) invalid("lattice", "basis must have one row per dimension");
    }
    if (present(j, "family")) spec.family = canonical_family(j.at("family"), "family", spec.dimension);
    if (present(j, "family2")) spec.family2 = canonical_family(j.at("family2"), "family2", spec.dimension);
    if (present(j, "m_generators")) {
        spec.m_generators = get_vecs(j.at("m_generators"), "m_generators");
        check_dims(*spec.m_generators, spec.dimension, "m_generators");
    }

    const Json& tasks = j.at("tasks");
    if (!tasks.is_array()) parse_fail("tasks", "expected an array of task names");
    for (const auto& t : tasks) {
        if (!t.is_string()) parse_fail("tasks", "expected task names");
        std::string name = t.get<std::string>();
        if (!kTasks.count(name)) invalid("tasks", "unknown task \"" + name + "\"");
        if (name == "eghk" && spec.dimension != 2) invalid("tasks", "eghk requires dimension 2");
        spec.tasks.push_back(name);
    }
    if (spec.tasks.empty()) invalid("tasks", "no tasks given");

    if (present(j, "e_max")) {
        const std::int64_t e = get_int(j.at("e_max"), "e_max");
        if (e < 1 || e > 62) invalid("e_max", "must be between 1 and 62");
        spec.e_max = static_cast<int>(e);
    }
    __int128 top = 1;
    for (int e = 0; e < spec.e_max; ++e) top *= spec.prime;
    if (top > static_cast<__int128>(1) << 40) invalid("e_max", "p^e_max exceeds 2^40");

    if (present(j, "truncation")) {
        const Json& t = j.at("truncation");
        check_keys(t, "truncation", {"vector", "bound"});
        if (present(t, "vector")) {
            spec.truncation_vector = get_vec(t.at("vector"), "truncation.vector");
            check_dims({*spec.truncation_vector}, spec.dimension, "truncation.vector");
        }
        if (present(t, "bound")) spec.truncation_bound = get_rat(t.at("bound"), "truncation.bound");
        if (spec.truncation_bound <= 0) invalid("truncation.bound", "must be positive");
    }

    if (present(j, "options")) {
        const Json& o = j.at("options");
        check_keys(o, "options", {"mc_samples", "saturation_bound", "qo_max_e", "positivity_e_max", "validate_e_max",
                                  "intersection_e_max", "intersection_c", "shift", "hilbert_search_bound"});
        auto small = [&](const char* key, int lo, int hi) {
            const std::int64_t v = get_int(o.at(key), std::string("options.") + key);
            if (v < lo || v > hi) invalid(std::string("options.") + key, "must be between " + std::to_string(lo) + " and " + std::to_string(hi));
            return static_cast<int>(v);
        };
        auto& opt = spec.options;
        if (present(o, "mc_samples")) {
            const std::int64_t v = get_int(o.at("mc_samples"), "options.mc_samples");
            if (v < 1) invalid("options.mc_samples", "must be positive");
            opt.mc_samples = static_cast<std::uint64_t>(v);
        }
        if (present(o, "saturation_bound")) {
            opt.saturation_bound = get_int(o.at("saturation_bound"), "options.saturation_bound");
            if (*opt.saturation_bound < 0) invalid("options.saturation_bound", "must be nonnegative");
        }
        if (present(o, "qo_max_e")) opt.qo_max_e = small("qo_max_e", 0, 20);
        if (present(o, "positivity_e_max")) opt.positivity_e_max = small("positivity_e_max", 0, 30);
        if (present(o, "validate_e_max")) opt.validate_e_max = small("validate_e_max", 1, 30);
        if (present(o, "intersection_e_max")) opt.intersection_e_max = small("intersection_e_max", 0, 30);
        if (present(o, "intersection_c")) {
            opt.intersection_c = get_int(o.at("intersection_c"), "options.intersection_c");
            if (opt.intersection_c < 1) invalid("options.intersection_c", "must be positive");
        }
        if (present(o, "shift")) {
            const Json& s = o.at("shift");
            check_keys(s, "options.shift", {"w", "lambda"});
            if (!s.contains("w") || !s.contains("lambda")) parse_fail("options.shift", "needs \"w\" and \"lambda\"");
            opt.shift_w = get_vec(s.at("w"), "options.shift.w");
            check_dims({*opt.shift_w}, spec.dimension, "options.shift.w");
            opt.shift_lambda = get_rat(s.at("lambda"), "options.shift.lambda");
            if (*opt.shift_lambda <= 0) invalid("options.shift.lambda", "must be positive");
        }
        if (present(o, "hilbert_search_bound")) {
            opt.hilbert_search_bound = get_rat(o.at("hilbert_search_bound"), "options.hilbert_search_bound");
            if (*opt.hilbert_search_bound <= 0) invalid("options.hilbert_search_bound", "must be positive");
        }
    }
    if (present(j, "seed")) {
        const std::int64_t s = get_int(j.at("seed"), "seed");
        if (s < 0) invalid("seed", "must be nonnegative");
        spec.seed = static_cast<std::uint64_t>(s);
    }
    resolve(spec);
    return spec;
}

ProblemSpec parse_problem_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    return parse_problem_json(j);
}

ProblemSpec parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

Json canonical_json(const ProblemSpec& spec) {
    Json j;
    j["dimension"] = spec.dimension;
    j["prime"] = spec.prime;
    j["cone"] = Json{{spec.cone_by_normals ? "normals" : "rays", vecs_json(spec.cone_vectors)}};
    j["lattice"] = spec.lattice ? vecs_json(*spec.lattice) : Json(nullptr);
    j["family"] = spec.family ? *spec.family : Json(nullptr);
    j["family2"] = spec.family2 ? *spec.family2 : Json(nullptr);
    j["m_generators"] = spec.m_generators ? vecs_json(*spec.m_generators) : Json(nullptr);
    j["tasks"] = spec.tasks;
    j["e_max"] = spec.e_max;
    j["truncation"] = Json{{"vector", spec.truncation_vector ? Json(*spec.truncation_vector) : Json(nullptr)},
                           {"bound", to_string(spec.truncation_bound)}};
    const auto& o = spec.options;
    Json shift = nullptr;
    if (o.shift_w) shift = Json{{"w", *o.shift_w}, {"lambda", to_string(*o.shift_lambda)}};
    j["options"] = Json{{"mc_samples", o.mc_samples},
                        {"saturation_bound", o.saturation_bound ? Json(*o.saturation_bound) : Json(nullptr)},
                        {"qo_max_e", o.qo_max_e},
                        {"positivity_e_max", o.positivity_e_max},
                        {"validate_e_max", o.validate_e_max},
                        {"intersection_e_max", o.intersection_e_max},
                        {"intersection_c", o.intersection_c},
                        {"shift", shift},
                        {"hilbert_search_bound", o.hilbert_search_bound ? Json(to_string(*o.hilbert_search_bound)) : Json(nullptr)}};
    j["seed"] = spec.seed;
    return j;
}

Resolved resolve(const ProblemSpec& spec) {
    const int d = spec.dimension;
    std::vector<IntVec> basis = spec.lattice ? *spec.lattice : std::vector<IntVec>{};
    if (!spec.lattice) {
        for (int i = 0; i < d; ++i) {
            IntVec row(static_cast<std::size_t>(d), 0);
            row[static_cast<std::size_t>(i)] = 1;
            basis.push_back(row);
        }
    }
    geometry::LatticeTransform transform;
    std::optional<geometry::Cone> cone;
    try {
        if (!spec.cone_by_normals) {
            auto nc = geometry::lattice_normalize(d, basis, spec.cone_vectors);
            cone = nc.cone;
            transform = nc.transform;
        } else {
            transform = geometry::lattice_transform(d, basis);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularBasis) invalid("lattice", e.what());
        invalid("cone", e.what());
    } catch (const std::exception& e) {
        invalid("cone", e.what());
    }
    if (spec.cone_by_normals) {
        std::vector<IntVec> normals;
        for (const auto& n : spec.cone_vectors) normals.push_back(transform.pull_back_functional(n));
        try {
            cone = geometry::Cone::from_normals(d, normals);
        } catch (const Error& e) {
            invalid("cone", e.what());
        }
    }

    std::optional<psystem::PSystem> family, family2;
    if (spec.family) family = build_family(*spec.family, *cone, spec.prime, transform, "family");
    if (spec.family2) family2 = build_family(*spec.family2, *cone, spec.prime, transform, "family2");

    std::optional<std::vector<IntVec>> mgens;
    if (spec.m_generators) {
        mgens.emplace();
        for (const auto& g : *spec.m_generators) {
            IntVec local = map_primal(transform, g, "m_generators");
            if (is_zero(local) || !cone->contains(local)) invalid("m_generators", to_string(g) + " is not a nonzero semigroup element");
            mgens->push_back(local);
        }
        if (mgens->empty()) invalid("m_generators", "list is empty");
    }

    geometry::TruncatingHalfspace h;
    try {
        IntVec a = spec.truncation_vector ? transform.pull_back_functional(*spec.truncation_vector) : cone->truncating_vector();
        h = geometry::TruncatingHalfspace::make(*cone, a, spec.truncation_bound);
    } catch (const Error& e) {
        invalid("truncation", e.what());
    }

    std::optional<IntVec> shift;
    if (spec.options.shift_w) {
        shift = map_primal(transform, *spec.options.shift_w, "options.shift.w");
        if (is_zero(*shift) || !cone->contains(*shift)) invalid("options.shift.w", "must be a nonzero semigroup element");
    }
    return Resolved{*cone, transform, family, family2, mgens, h, shift};
}

}  // namespace pbody::cli
