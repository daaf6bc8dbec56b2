#pragma once

#include <string>

#include "pbody/cli/problem.hpp"

namespace pbody::cli {

struct RunOptions {
    int workers = 1;
    bool use_cache = true;
    std::string cache_dir;  // empty: PBODY_CACHE_DIR, else ./.pbody-cache
};

/// Lowercase hex SHA-256 of the canonical spec and tool version.
std::string input_hash(const ProblemSpec& spec);

/// Runs every task in order; a failing task is recorded and siblings continue.
/// The "timestamps" member holds wall times and cache_hit and is the only
/// part that may differ between runs.
Json run(const ProblemSpec& spec, const RunOptions& options);

/// True when every task succeeded.
bool all_ok(const Json& report);

void emit_json(const Json& report, const std::string& path);
/// Record tables as CSV: the first record-producing task goes to path, later
/// ones to <stem>.<index>.<task>.csv beside it. Returns the files written.
std::vector<std::string> emit_csv(const Json& report, const std::string& path);

/// CSV text of one task's records.
std::string records_csv(const Json& records);

std::string resolve_cache_dir(const std::string& flag);

}  // namespace pbody::cli
