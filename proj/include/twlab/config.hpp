#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twlab::config {

struct HmConfig {
    double t_min = -12.0;
    double t_max = 8.0;
    int n = 4000;
    double tol = 1e-10;
    bool operator==(const HmConfig&) const = default;
};

struct AuxConfig {
    double t_start = 12.0;
    double tol = 1e-12;
    std::string route = "linear";  // linear | nonlinear
    bool operator==(const AuxConfig&) const = default;
};

// Ranges are "a:b:step", windows "a:b". grid.t and grid.window use the external argument;
// the PDE box is in internal variables.
struct GridConfig {
    std::string t = "-5:5:0.01";
    std::string window = "-9:-6";
    std::string x = "-3:3";
    std::string pde_t = "-5:1";
    double pde_h = 1.0 / 64.0;
    bool operator==(const GridConfig&) const = default;
};

struct OracleConfig {
    int n = 400;
    int count = 20000;
    std::uint64_t seed = 20250101;
    int fredholm_m = 60;
    bool operator==(const OracleConfig&) const = default;
};

struct RunConfig {
    std::string command;
    int beta = 2;
    HmConfig hm;
    AuxConfig aux;
    GridConfig grid;
    OracleConfig oracle;
    std::string out_dir = "twlab_out";
    std::string format = "csv";  // csv | json
    bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& keys();

// Errc::ParseError for an unknown key or a malformed value (no location).
void set(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get(const RunConfig& cfg, const std::string& key);

// "key = value" per line, '#' starts a comment. ParseError with line/column on unknown or
// repeated keys and malformed values.
RunConfig parse(const std::string& text);
RunConfig load(const std::string& path);
// Every key, doubles at 17 significant digits, so parse(serialize(c)) == c.
std::string serialize(const RunConfig& cfg);
void save(const RunConfig& cfg, const std::string& path);

// Errc::Domain for non-positive tolerances, unknown command, bad beta or format, and
// malformed grid strings.
void validate(const RunConfig& cfg);

}  // namespace twlab::config
