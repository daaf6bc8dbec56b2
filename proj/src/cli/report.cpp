#include "pbody/cli/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "pbody/error.hpp"
#include "pbody/geometry/volume.hpp"
#include "pbody/lattice/hilbert_basis.hpp"
#include "pbody/limits/limits.hpp"

namespace pbody::cli {

namespace fs = std::filesystem;

namespace {

Json rat_json(const Rat& r) { return Json{{"value", to_string(r)}, {"decimal", to_decimal(r)}}; }

Json records_json(const std::vector<lattice::CountRecord>& records) {
    Json rows = Json::array();
    for (const auto& r : records) {
        auto nc = r.normalized_colength();
        rows.push_back(Json{{"e", r.e},
                            {"q", r.q},
                            {"count", r.count},
                            {"colength", r.colength ? Json(*r.colength) : Json(nullptr)},
                            {"normalized_count", rat_json(r.normalized_count())},
                            {"normalized_colength", nc ? rat_json(*nc) : Json(nullptr)}});
    }
    return rows;
}

Json volume_report_json(const limits::VolumeReport& v) {
    return Json{{"records", records_json(v.records)},
                {"limit_estimate", rat_json(v.limit_estimate)},
                {"limit_method", v.limit_method},
                {"exact", v.exact ? rat_json(*v.exact) : Json(nullptr)},
                {"certification", v.certification},
                {"superadditivity_violations", v.superadditivity_violations},
                {"monotone_tail", v.monotone_tail}};
}

Json ambient(const Resolved& r, const IntVec& v) { return r.transform.to_ambient(v); }

struct Context {
    const ProblemSpec& spec;
    const Resolved& res;
    int workers;
};

const psystem::PSystem& need_family(const Context& c, const char* task) {
    if (!c.res.family) fail(ErrorKind::InvalidArgument, std::string(task) + " requires a family");
    return *c.res.family;
}

const psystem::PSystem& need_frobenius(const Context& c, const char* task) {
    const auto& ps = need_family(c, task);
    if (ps.kind() != psystem::Kind::Frobenius) fail(ErrorKind::InvalidArgument, std::string(task) + " requires a frobenius family");
    return ps;
}

std::optional<std::pair<Rat, std::string>> exact_limit(const psystem::PSystem& ps) {
    using psystem::Kind;
    if (ps.dim() > geometry::kMaxExactVolumeDim) return std::nullopt;
    switch (ps.kind()) {
        case Kind::Frobenius: return std::make_pair(limits::hk_exact(ps.cone(), ps.base_generators()), "vol(C \\ (U + C))");
        case Kind::FSignature: return std::make_pair(limits::fsig_exact(ps.cone()), "vol(P)");
        case Kind::Constant: return std::make_pair(Rat(0), "constant family");
        default: return std::nullopt;
    }
}

Json task_hk(const Context& c) {
    const auto& ps = need_frobenius(c, "hk");
    auto v = geometry::region_volume_exact({ps.cone(), ps.base_generators(), std::nullopt});
    return Json{{"value", rat_json(*v.value)}, {"method", std::string(geometry::method_name(v.method))}, {"cells", v.cells}};
}

Json task_fsig(const Context& c) {
    const auto& cone = c.res.cone;
    Rat exact = limits::fsig_exact(cone);
    auto mc = geometry::polytope_volume_monte_carlo(cone.dim(), limits::fsig_polytope(cone), c.spec.options.mc_samples, c.spec.seed, c.workers);
    const double dev = std::abs(mc.mean - to_double(exact));
    auto ps = psystem::PSystem::fsignature(cone, c.spec.prime);
    auto seq = limits::volume_sequence(ps, c.spec.e_max, c.res.truncation, limits::Mode::Colength, c.workers);
    limits::attach_exact(seq, exact, "vol(P)");
    return Json{{"value", rat_json(exact)},
                {"monte_carlo", Json{{"mean", mc.mean},
                                     {"standard_error", mc.standard_error},
                                     {"samples", mc.samples},
                                     {"seed", mc.seed},
                                     {"within_4_standard_errors", dev <= 4 * mc.standard_error}}},
                {"sequence", volume_report_json(seq)}};
}

Json task_fsig_pair(const Context& c) {
    if (!c.res.shift_w) fail(ErrorKind::InvalidArgument, "fsig-pair requires options.shift");
    auto rep = limits::fsig_pair(c.res.cone, c.spec.prime, *c.res.shift_w, *c.spec.options.shift_lambda, c.spec.e_max, c.workers);
    return volume_report_json(rep);
}

Json task_sequence(const Context& c, bool with_exact) {
    const auto& ps = need_family(c, with_exact ? "limit" : "colength");
    // The limit of a non-primary family is the truncated body volume.
    bool primary = true;
    if (with_exact) {
        try {
            lattice::colength_bound(ps, ps.prime());
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotPrimary) throw;
            primary = false;
        }
    }
    const auto mode = primary ? limits::Mode::Colength : limits::Mode::Truncation;
    auto rep = limits::volume_sequence(ps, c.spec.e_max, c.res.truncation, mode, c.workers);
    if (primary && with_exact)
        if (auto ex = exact_limit(ps)) limits::attach_exact(rep, ex->first, ex->second);
    Json out = volume_report_json(rep);
    out["mode"] = primary ? "colength" : "truncation";
    return out;
}

Json task_eghk(const Context& c) {
    const auto& ps = need_frobenius(c, "eghk");
    auto rep = limits::eghk_2d(c.res.cone, c.spec.prime, ps.base_generators(), c.spec.e_max, c.workers);
    const int ie = c.spec.options.intersection_e_max;
    auto ic = limits::intersection_condition_check(c.res.cone, c.spec.prime, ps.base_generators(), c.spec.options.intersection_c,
                                                   ie, c.res.m_generators);
    Json inter{{"pass", ic.pass}, {"c", c.spec.options.intersection_c}, {"e_max", ie}, {"points_checked", ic.points_checked}};
    if (!ic.pass) {
        inter["q"] = ic.q;
        inter["witness"] = ambient(c.res, ic.witness);
        inter["order"] = ic.order;
    }
    return Json{{"sequence", volume_report_json(rep)}, {"intersection", inter}};
}

Json task_bm(const Context& c) {
    if (!c.res.family || !c.res.family2) fail(ErrorKind::InvalidArgument, "bm requires two families");
    auto r = limits::brunn_minkowski_check(*c.res.family, *c.res.family2, c.spec.e_max, c.workers);
    return Json{{"v1", rat_json(r.v1)}, {"v2", rat_json(r.v2)}, {"v12", rat_json(r.v12)}, {"exact", r.exact},
                {"holds", r.holds},     {"lhs", r.lhs},           {"rhs", r.rhs}};
}

Json task_positivity(const Context& c) {
    const auto& ps = need_family(c, "positivity");
    auto r = limits::positivity_check(ps, c.spec.options.positivity_e_max, c.spec.options.qo_max_e, c.res.m_generators);
    return Json{{"verdict", std::string(limits::positivity_name(r.verdict))},
                {"certificate", r.verdict == limits::Positivity::Positive ? Json(r.certificate) : Json(nullptr)},
                {"reason", r.reason},
                {"lower_bound", r.lower_bound ? rat_json(*r.lower_bound) : Json(nullptr)}};
}

Json task_validate(const Context& c) {
    const auto& ps = need_family(c, "validate");
    auto r = psystem::validate_axiom(ps, c.spec.options.validate_e_max, c.res.truncation);
    Json out{{"pass", r.pass},
             {"e_max", c.spec.options.validate_e_max},
             {"points_checked", r.points_checked},
             {"ideal_pairs_checked", r.ideal_pairs_checked}};
    if (r.witness) {
        Json w{{"type", r.witness->type == psystem::AxiomViolation::Type::Frobenius ? "frobenius" : "ideal"},
               {"q", r.witness->q},
               {"u", ambient(c.res, r.witness->u)}};
        if (!r.witness->s.empty()) w["s"] = ambient(c.res, r.witness->s);
        out["witness"] = w;
    }
    return out;
}

Json task_hilbert(const Context& c) {
    auto hb = lattice::hilbert_basis(c.res.cone, c.spec.options.hilbert_search_bound);
    Json elems = Json::array();
    for (const auto& e : hb.elements) elems.push_back(ambient(c.res, e));
    return Json{{"elements", elems}, {"search_bound", to_string(hb.search_bound)}, {"verified_bound", to_string(hb.verified_bound)}};
}

Json run_task(const std::string& name, const Context& c) {
    if (name == "hk") return task_hk(c);
    if (name == "fsig") return task_fsig(c);
    if (name == "fsig-pair") return task_fsig_pair(c);
    if (name == "limit") return task_sequence(c, true);
    if (name == "colength") return task_sequence(c, false);
    if (name == "eghk") return task_eghk(c);
    if (name == "bm") return task_bm(c);
    if (name == "positivity") return task_positivity(c);
    if (name == "validate") return task_validate(c);
    if (name == "hilbert-basis") return task_hilbert(c);
    fail(ErrorKind::InvalidArgument, "unknown task " + name);
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::InvalidArgument, "SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::optional<Json> load_cached(const fs::path& file, const std::string& hash) {
    if (!fs::exists(file)) return std::nullopt;
    try {
        std::ifstream in(file);
        Json j = Json::parse(in);
        if (!j.is_object() || j.value("input_hash", "") != hash || !j.contains("tasks") || !j.at("tasks").is_array())
            fail(ErrorKind::CacheCorrupt, "entry does not match its key");
        return j;
    } catch (const std::exception& e) {
        std::cerr << "warning: " << kind_name(ErrorKind::CacheCorrupt) << ": ignoring cache entry " << file.string()
                  << " (" << e.what() << "); recomputing\n";
        return std::nullopt;
    }
}

void store_cached(const fs::path& dir, const fs::path& file, const Json& report) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << report.dump(2) << "\n";
    }
    fs::rename(tmp, file, ec);
}

}  // namespace

std::string input_hash(const ProblemSpec& spec) {
    return sha256_hex(canonical_json(spec).dump() + "\n" + kToolName + " " + kToolVersion);
}

std::string resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("PBODY_CACHE_DIR"); env && *env) return env;
    return "./.pbody-cache";
}

Json run(const ProblemSpec& spec, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const std::string hash = input_hash(spec);
    const fs::path dir = resolve_cache_dir(options.cache_dir);
    const fs::path file = dir / (hash + ".json");

    if (options.use_cache) {
        if (auto cached = load_cached(file, hash)) {
            (*cached)["timestamps"] = Json{{"cache_hit", true},
                                           {"task_wall_ms", Json::array()},
                                           {"total_wall_ms", std::chrono::duration<double, std::milli>(clock::now() - start).count()}};
            return *cached;
        }
    }

    const Resolved res = resolve(spec);
    Context ctx{spec, res, std::max(1, options.workers)};
    Json report{{"tool", kToolName}, {"version", kToolVersion}, {"input_hash", hash}, {"spec", canonical_json(spec)}};
    Json tasks = Json::array();
    Json walls = Json::array();
    for (const auto& name : spec.tasks) {
        const auto t0 = clock::now();
        Json entry{{"task", name}};
        try {
            entry["result"] = run_task(name, ctx);
            entry["status"] = "ok";
        } catch (const Error& e) {
            entry["status"] = "error";
            entry["error"] = Json{{"kind", std::string(kind_name(e.kind()))}, {"message", e.what()}};
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = Json{{"kind", "Internal"}, {"message", e.what()}};
        }
        tasks.push_back(entry);
        walls.push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    }
    report["tasks"] = tasks;
    if (options.use_cache) store_cached(dir, file, report);
    report["timestamps"] = Json{{"cache_hit", false},
                                {"task_wall_ms", walls},
                                {"total_wall_ms", std::chrono::duration<double, std::milli>(clock::now() - start).count()}};
    return report;
}

bool all_ok(const Json& report) {
    for (const auto& t : report.at("tasks"))
        if (t.value("status", "") != "ok") return false;
    return true;
}

void emit_json(const Json& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
    out << report.dump(2) << "\n";
}

std::string records_csv(const Json& records) {
    std::ostringstream out;
    out << "e,q,count,colength,normalized_count,normalized_colength\n";
    for (const auto& r : records) {
        out << r.at("e").get<std::int64_t>() << ',' << r.at("q").get<std::int64_t>() << ',' << r.at("count").get<std::uint64_t>() << ',';
        if (!r.at("colength").is_null()) out << r.at("colength").get<std::uint64_t>();
        out << ',' << r.at("normalized_count").at("decimal").get<std::string>() << ',';
        if (!r.at("normalized_colength").is_null()) out << r.at("normalized_colength").at("decimal").get<std::string>();
        out << '\n';
    }
    return out.str();
}

namespace {

const Json* records_of(const Json& task) {
    if (task.value("status", "") != "ok") return nullptr;
    const Json& r = task.at("result");
    if (r.contains("records")) return &r.at("records");
    if (r.contains("sequence") && r.at("sequence").contains("records")) return &r.at("sequence").at("records");
    return nullptr;
}

}  // namespace

std::vector<std::string> emit_csv(const Json& report, const std::string& path) {
    std::vector<std::string> written;
    const fs::path base(path);
    const auto& tasks = report.at("tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Json* records = records_of(tasks[i]);
        if (!records) continue;
        fs::path target = base;
        if (!written.empty()) {
            target = base.parent_path() / (base.stem().string() + "." + std::to_string(i) + "." +
                                           tasks[i].at("task").get<std::string>() + ".csv");
        }
        std::ofstream out(target);
        if (!out) fail(ErrorKind::ParseError, "cannot write " + target.string());
        out << records_csv(*records);
        written.push_back(target.string());
    }
    return written;
}

}  // namespace pbody::cli
