// pbody: batch front end for p-body volume computations.
#include <iostream>

#include <CLI11.hpp>

#include "pbody/cli/report.hpp"
#include "pbody/error.hpp"

int main(int argc, char** argv) {
    using namespace pbody;
    CLI::App app{"Exact p-body volumes, lattice-count limits and checks"};
    std::string input, out, csv, cache_dir;
    std::optional<int> e_max;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    bool no_cache = false;
    app.add_option("--input", input, "Problem file (JSON)")->required();
    app.add_option("--out", out, "Write the JSON report here instead of stdout");
    app.add_option("--csv", csv, "Write record tables as CSV");
    app.add_option("--e-max", e_max, "Override e_max");
    app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", cache_dir, "Result cache directory (default ./.pbody-cache)");
    app.add_option("--seed", seed, "Override the Monte Carlo seed");
    app.add_flag("--no-cache", no_cache, "Neither read nor write the cache");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    cli::Json report;
    try {
        auto spec = cli::parse_problem(input);
        if (e_max || seed) {
            auto j = cli::canonical_json(spec);
            if (e_max) j["e_max"] = *e_max;
            if (seed) j["seed"] = *seed;
            spec = cli::parse_problem_json(j);
        }
        report = cli::run(spec, {workers, !no_cache, cache_dir});
        if (out.empty()) {
            std::cout << report.dump(2) << "\n";
        } else {
            cli::emit_json(report, out);
        }
        if (!csv.empty()) cli::emit_csv(report, csv);
    } catch (const Error& e) {
        std::cerr << "error: " << kind_name(e.kind()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return cli::all_ok(report) ? 0 : 2;
}
