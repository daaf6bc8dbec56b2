#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pbody/cli/problem.hpp"
#include "pbody/cli/report.hpp"
#include "support.hpp"

using namespace test;
using cli::Json;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"dimension": 2, "prime": 2, "cone": {"rays": [[1,0],[0,1]]},
  "family": {"kind": "frobenius", "generators": [[1,0],[0,1]]}, "tasks": ["hk"]})";

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("pbody-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json without_timestamps(Json j) {
    j.erase("timestamps");
    return j;
}

std::string validation_field(const std::string& text) {
    try {
        cli::parse_problem_text(text);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ValidationError) return "kind " + std::string(kind_name(e.kind()));
        const std::string msg = e.what();
        return msg.substr(0, msg.find(':'));
    }
    return "accepted";
}

Json patch(const char* base, const Json& changes) {
    Json j = Json::parse(base);
    j.merge_patch(changes);
    return j;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(PBODY_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse problems") {
    auto spec = cli::parse_problem_text(kMinimal);
    CHECK(spec.dimension == 2);
    CHECK(spec.e_max == 8);
    CHECK(spec.tasks == std::vector<std::string>{"hk"});
    CHECK(spec.truncation_bound == 1);
    CHECK(spec.options.mc_samples == 1'000'000);

    CHECK(validation_field(patch(kMinimal, {{"prime", 4}}).dump()) == "prime");
    CHECK(validation_field(R"({"dimension": 3, "prime": 2, "cone": {"rays": [[1,0,0],[0,1,0],[0,0,1]]},
      "family": {"kind": "frobenius", "generators": [[1,0,0]]}, "tasks": ["eghk"]})") == "tasks");
    CHECK(validation_field(patch(kMinimal, {{"tasks", {"volume"}}}).dump()) == "tasks");
    CHECK(validation_field(patch(kMinimal, {{"e_max", 0}}).dump()) == "e_max");
    CHECK(validation_field(patch(kMinimal, {{"cone", {{"rays", {{1, 0}, {-1, 0}, {0, 1}}}}}}).dump()) == "cone");
    CHECK(kind_of([] { cli::parse_problem_text("{\n\"dimension\": 2,\n\"prime\": }"); }) == ErrorKind::ParseError);
    try {
        cli::parse_problem_text("{\n\"dimension\": 2,\n\"prime\": }");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(kind_of([] { cli::parse_problem_text(R"({"dimension": "two"})"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { cli::parse_problem_text(patch(kMinimal, {{"colour", 1}}).dump()); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { cli::parse_problem("/nonexistent/problem.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("canonical round trip") {
    for (const auto& entry : fs::directory_iterator(PBODY_PROBLEMS_DIR)) {
        auto spec = cli::parse_problem(entry.path().string());
        auto again = cli::parse_problem_json(cli::canonical_json(spec));
        CHECK(again == spec);
        CHECK(cli::canonical_json(again) == cli::canonical_json(spec));
    }
    auto spec = cli::parse_problem_text(kMinimal);
    CHECK(cli::parse_problem_text(cli::canonical_json(spec).dump(2)) == spec);
}

TEST_CASE("lattice option maps to the sublattice") {
    auto spec = cli::parse_problem_text(R"({"dimension": 2, "prime": 2, "cone": {"rays": [[2,0],[0,2]]},
      "lattice": [[1,1],[0,2]], "family": {"kind": "fsignature"}, "tasks": ["hk"]})");
    auto res = cli::resolve(spec);
    CHECK(res.cone.rays() == std::vector<IntVec>{{0, 1}, {2, -1}});
}

TEST_CASE("run reports") {
    auto dir = scratch("run");
    auto spec = cli::parse_problem(std::string(PBODY_PROBLEMS_DIR) + "/a1.json");
    cli::RunOptions opt{1, true, dir.string()};
    const Json fresh = cli::run(spec, opt);
    REQUIRE(cli::all_ok(fresh));
    CHECK(fresh["tasks"][0]["result"]["value"]["value"] == "3/2");
    CHECK(fresh["tasks"][1]["result"]["value"]["value"] == "1/2");
    CHECK(fresh["tasks"][2]["result"]["records"].size() == 10);
    CHECK(fresh["tasks"][2]["result"]["exact"]["value"] == "3/2");
    CHECK(fresh["tasks"][2]["result"]["mode"] == "colength");
    CHECK(fresh["timestamps"]["cache_hit"] == false);
    CHECK(fresh["input_hash"].get<std::string>().size() == 64);
    CHECK(fs::exists(dir / (cli::input_hash(spec) + ".json")));

    Json cached = cli::run(spec, opt);
    CHECK(cached["timestamps"]["cache_hit"] == true);
    CHECK(without_timestamps(cached).dump() == without_timestamps(fresh).dump());

    auto bm = cli::parse_problem_text(patch(kMinimal, {{"tasks", {"bm", "hk"}}}).dump());
    Json r = cli::run(bm, {1, false, ""});
    CHECK_FALSE(cli::all_ok(r));
    CHECK(r["tasks"][0]["status"] == "error");
    CHECK(r["tasks"][0]["error"]["message"] == "bm requires two families");
    CHECK(r["tasks"][1]["status"] == "ok");
    fs::remove_all(dir);
}

TEST_CASE("csv output") {
    auto dir = scratch("csv");
    auto spec = cli::parse_problem_text(patch(kMinimal, {{"tasks", {"hk", "limit", "colength"}}, {"e_max", 3}}).dump());
    Json r = cli::run(spec, {1, false, ""});
    auto files = cli::emit_csv(r, (dir / "out.csv").string());
    REQUIRE(files.size() == 2);
    const std::string text = slurp(files[0]);
    CHECK(text.rfind("e,q,count,colength,normalized_count,normalized_colength\n", 0) == 0);
    CHECK(text.find("\n3,8,") != std::string::npos);
    CHECK(fs::path(files[1]).filename() == "out.2.colength.csv");
    auto trunc = cli::parse_problem_text(patch(kMinimal, {{"tasks", {"limit"}}, {"e_max", 2}, {"family", {{"kind", "frobenius"}, {"generators", {{1, 0}}}}}}).dump());
    const Json t = cli::run(trunc, {1, false, ""});
    CHECK(t["tasks"][0]["result"]["mode"] == "truncation");
    CHECK(cli::records_csv(t["tasks"][0]["result"]["records"]).find(",,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("corrupt cache entries are recomputed") {
    auto dir = scratch("corrupt");
    auto spec = cli::parse_problem_text(kMinimal);
    cli::RunOptions opt{1, true, dir.string()};
    Json fresh = cli::run(spec, opt);
    const fs::path file = dir / (cli::input_hash(spec) + ".json");
    std::ofstream(file) << "{ not json";
    Json again = cli::run(spec, opt);
    CHECK(again["timestamps"]["cache_hit"] == false);
    CHECK(without_timestamps(again) == without_timestamps(fresh));
    CHECK(Json::parse(slurp(file))["input_hash"] == fresh["input_hash"]);
    fs::remove_all(dir);
}

TEST_CASE("property: determinism across worker counts") {
    for (const char* name : {"a1.json"}) {
        auto spec = cli::parse_problem(std::string(PBODY_PROBLEMS_DIR) + "/" + name);
        Json one = cli::run(spec, {1, false, ""});
        Json four = cli::run(spec, {4, false, ""});
        CHECK(without_timestamps(one).dump() == without_timestamps(four).dump());
    }
}

TEST_CASE("property: cache soundness on random specs") {
    auto dir = scratch("sound");
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> coord(0, 3);
    const std::vector<std::vector<std::string>> task_sets = {{"hk", "colength"}, {"fsig", "positivity"}, {"limit", "validate"}, {"eghk"}, {"bm", "hk"}};
    for (int i = 0; i < 20; ++i) {
        Json gens = {{coord(rng) + 1, 0}, {0, coord(rng) + 1}, {coord(rng), coord(rng)}};
        Json j = {{"dimension", 2},
                  {"prime", std::array{2, 3, 5}[i % 3]},
                  {"cone", {{"rays", {{1, 0}, {0, 1}}}}},
                  {"family", {{"kind", "frobenius"}, {"generators", gens}}},
                  {"family2", {{"kind", "frobenius"}, {"generators", {{1, 0}, {0, coord(rng) + 1}}}}},
                  {"tasks", task_sets[static_cast<std::size_t>(i) % task_sets.size()]},
                  {"e_max", 2 + i % 3},
                  {"options", {{"mc_samples", 20000}, {"positivity_e_max", 2}, {"validate_e_max", 2}, {"intersection_e_max", 2}, {"qo_max_e", 1}}},
                  {"seed", i}};
        auto spec = cli::parse_problem_json(j);
        Json fresh = cli::run(spec, {1, true, dir.string()});
        CHECK(fresh["timestamps"]["cache_hit"] == false);
        Json hit = cli::run(spec, {1, true, dir.string()});
        CHECK(hit["timestamps"]["cache_hit"] == true);
        CHECK(without_timestamps(hit).dump() == without_timestamps(fresh).dump());
        Json uncached = cli::run(spec, {2, false, ""});
        CHECK(without_timestamps(uncached).dump() == without_timestamps(fresh).dump());
    }
    fs::remove_all(dir);
}

TEST_CASE("tool exit codes") {
    auto dir = scratch("tool");
    const std::string good = (dir / "good.json").string();
    std::ofstream(good) << kMinimal;
    const std::string failing = (dir / "bm.json").string();
    std::ofstream(failing) << patch(kMinimal, {{"tasks", {"bm"}}}).dump();
    const std::string invalid = (dir / "bad.json").string();
    std::ofstream(invalid) << patch(kMinimal, {{"prime", 4}}).dump();
    const std::string cache = " --cache-dir " + (dir / "cache").string();
    CHECK(run_tool("--input " + good + cache + " --out " + (dir / "r.json").string() + " --csv " + (dir / "r.csv").string()) == 0);
    CHECK(fs::exists(dir / "r.json"));
    CHECK(run_tool("--input " + failing + cache) == 2);
    CHECK(run_tool("--input " + invalid + cache) == 1);
    CHECK(run_tool("--input " + (dir / "missing.json").string() + cache) == 1);
    CHECK(run_tool("") != 0);
    CHECK(run_tool("--input " + good + " --no-cache --e-max 3 --workers 2 --seed 9 --out " + (dir / "o.json").string()) == 0);
    Json o = Json::parse(slurp(dir / "o.json"));
    CHECK(o["spec"]["e_max"] == 3);
    CHECK(o["spec"]["seed"] == 9);
    fs::remove_all(dir);
}
