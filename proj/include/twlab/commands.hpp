#pragma once

#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "twlab/config.hpp"

namespace twlab::cmd {

inline constexpr const char* kVersion = "0.4.0";

// pass iff min <= value <= max
struct Check {
    std::string name;
    double value = 0;
    double min = -HUGE_VAL;
    double max = HUGE_VAL;
    bool pass = false;
};

struct RunResult {
    int exit_code = 0;  // 0 all checks pass, 1 tolerance violation or numerical failure, 2 config error
    std::string manifest_path;
    std::vector<std::string> artifacts;  // paths
    std::vector<Check> checks;
    std::string error_json;  // set when exit_code != 0 because of an exception
};

// Validates, runs cfg.command, writes artifacts and <out.dir>/<command>.manifest.json.
RunResult run(const config::RunConfig& cfg);

// {"error": {"code", "message"[, "line", "column"]}}
std::string error_json(const std::exception& e);

// Hex FNV-1a of a file, as recorded in manifests.
std::string file_hash(const std::string& path);

}  // namespace twlab::cmd
