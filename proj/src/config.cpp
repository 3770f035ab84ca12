#include "twlab/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

#include "twlab/errors.hpp"
#include "twlab/util.hpp"

namespace twlab::config {

namespace {

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

[[noreturn]] void bad_value(const std::string& v, const char* what) {
    fail(Errc::ParseError, fmt::format("'{}' is not {}", v, what));
}

double to_double(const std::string& v) {
    double x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(v, "a number");
    return x;
}

template <class I>
I to_int(const std::string& v) {
    I x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(v, "an integer");
    return x;
}

template <class S>
Field dbl(const char* k, S RunConfig::*sect, double S::*m) {
    return {k, [sect, m](const RunConfig& c) { return util::fmt17(c.*sect.*m); },
            [sect, m](RunConfig& c, const std::string& v) { c.*sect.*m = to_double(v); }};
}

template <class S, class I>
Field integer(const char* k, S RunConfig::*sect, I S::*m) {
    return {k, [sect, m](const RunConfig& c) { return std::to_string(c.*sect.*m); },
            [sect, m](RunConfig& c, const std::string& v) { c.*sect.*m = to_int<I>(v); }};
}

template <class S>
Field str(const char* k, S RunConfig::*sect, std::string S::*m) {
    return {k, [sect, m](const RunConfig& c) { return c.*sect.*m; },
            [sect, m](RunConfig& c, const std::string& v) { c.*sect.*m = v; }};
}

Field str(const char* k, std::string RunConfig::*m) {
    return {k, [m](const RunConfig& c) { return c.*m; },
            [m](RunConfig& c, const std::string& v) { c.*m = v; }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        str("command", &RunConfig::command),
        {"beta", [](const RunConfig& c) { return std::to_string(c.beta); },
         [](RunConfig& c, const std::string& v) { c.beta = to_int<int>(v); }},
        dbl("hm.t_min", &RunConfig::hm, &HmConfig::t_min),
        dbl("hm.t_max", &RunConfig::hm, &HmConfig::t_max),
        integer("hm.n", &RunConfig::hm, &HmConfig::n),
        dbl("hm.tol", &RunConfig::hm, &HmConfig::tol),
        dbl("aux.t_start", &RunConfig::aux, &AuxConfig::t_start),
        dbl("aux.tol", &RunConfig::aux, &AuxConfig::tol),
        str("aux.route", &RunConfig::aux, &AuxConfig::route),
        str("grid.t", &RunConfig::grid, &GridConfig::t),
        str("grid.window", &RunConfig::grid, &GridConfig::window),
        str("grid.x", &RunConfig::grid, &GridConfig::x),
        str("grid.pde_t", &RunConfig::grid, &GridConfig::pde_t),
        dbl("grid.pde_h", &RunConfig::grid, &GridConfig::pde_h),
        integer("oracle.n", &RunConfig::oracle, &OracleConfig::n),
        integer("oracle.count", &RunConfig::oracle, &OracleConfig::count),
        integer("oracle.seed", &RunConfig::oracle, &OracleConfig::seed),
        integer("oracle.fredholm_m", &RunConfig::oracle, &OracleConfig::fredholm_m),
        str("out.dir", &RunConfig::out_dir),
        str("format", &RunConfig::format),
    };
    return f;
}

const Field* find(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

std::size_t trim_left(const std::string& s, std::size_t i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return i;
}

std::string trim_right(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> c = {"hm-solve",  "aux-solve",   "tw-table",
                                               "verify-identities", "verify-pde", "mc-edge",
                                               "fredholm-f2", "tails-compare"};
    return c;
}

const std::vector<std::string>& keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> v;
        for (const auto& f : fields()) v.push_back(f.key);
        return v;
    }();
    return k;
}

void set(RunConfig& cfg, const std::string& key, const std::string& value) {
    const Field* f = find(key);
    if (!f) fail(Errc::ParseError, fmt::format("unknown key '{}'", key));
    f->set(cfg, value);
}

std::string get(const RunConfig& cfg, const std::string& key) {
    const Field* f = find(key);
    if (!f) fail(Errc::ParseError, fmt::format("unknown key '{}'", key));
    return f->get(cfg);
}

RunConfig parse(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim_right(line);
        std::size_t k0 = trim_left(line, 0);
        if (k0 == line.size()) continue;

        std::size_t eq = line.find('=', k0);
        if (eq == std::string::npos)
            throw ParseError(line_no, (int)k0 + 1, "expected 'key = value'");
        std::string key = trim_right(line.substr(k0, eq - k0));
        if (key.empty()) throw ParseError(line_no, (int)k0 + 1, "missing key");
        const Field* f = find(key);
        if (!f) throw ParseError(line_no, (int)k0 + 1, fmt::format("unknown key '{}'", key));
        if (!seen.insert(key).second)
            throw ParseError(line_no, (int)k0 + 1, fmt::format("key '{}' given twice", key));

        std::size_t v0 = trim_left(line, eq + 1);
        std::string value = line.substr(v0);
        try {
            f->set(cfg, value);
        } catch (const Error& e) {
            throw ParseError(line_no, (int)v0 + 1, fmt::format("{}: {}", key, e.what()));
        }
    }
    return cfg;
}

RunConfig load(const std::string& path) { return parse(util::read_file(path)); }

std::string serialize(const RunConfig& cfg) {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
    return out;
}

void save(const RunConfig& cfg, const std::string& path) { util::write_file(path, serialize(cfg)); }

void validate(const RunConfig& c) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), c.command) == names.end())
        fail(Errc::Domain, c.command.empty() ? std::string("no command given")
                                             : fmt::format("unknown command '{}'", c.command));
    if (c.beta != 2 && c.beta != 6) fail(Errc::Domain, fmt::format("beta = {} (supported: 2, 6)", c.beta));
    if (!(c.hm.tol > 0) || !(c.aux.tol > 0)) fail(Errc::Domain, "tolerances must be positive");
    if (!(c.hm.t_min < c.hm.t_max)) fail(Errc::Domain, "hm.t_min must be below hm.t_max");
    if (c.hm.n < 16) fail(Errc::Domain, "hm.n must be at least 16");
    if (c.aux.route != "linear" && c.aux.route != "nonlinear")
        fail(Errc::Domain, fmt::format("aux.route '{}' (linear | nonlinear)", c.aux.route));
    if (!(c.grid.pde_h > 0)) fail(Errc::Domain, "grid.pde_h must be positive");
    if (c.oracle.n < 50 || c.oracle.count < 1) fail(Errc::Domain, "oracle.n >= 50 and oracle.count >= 1");
    if (c.format != "csv" && c.format != "json")
        fail(Errc::Domain, fmt::format("format '{}' (csv | json)", c.format));
    if (c.out_dir.empty()) fail(Errc::Domain, "out.dir is empty");
    try {
        util::parse_range(c.grid.t);
        util::parse_window(c.grid.window);
        util::parse_window(c.grid.x);
        util::parse_window(c.grid.pde_t);
    } catch (const Error& e) {
        fail(Errc::Domain, e.what());
    }
}

}  // namespace twlab::config
