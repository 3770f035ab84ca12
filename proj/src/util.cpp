#include "twlab/util.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "twlab/errors.hpp"

namespace twlab::util {

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

std::string csv_row(const std::vector<double>& vals) {
    std::string s;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) s += ',';
        s += fmt17(vals[i]);
    }
    s += '\n';
    return s;
}

std::string csv_row(std::initializer_list<double> vals) {
    return csv_row(std::vector<double>(vals));
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int worker_count() {
    if (const char* e = std::getenv("TWLAB_THREADS")) {
        int v = std::atoi(e);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

namespace {

double to_num(const std::string& s, const std::string& whole) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(1, 1, "malformed number '" + s + "' in '" + whole + "'");
    }
}

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
    auto p = split_colon(spec);
    if (p.size() != 3) throw ParseError(1, 1, "range must be a:b:step, got '" + spec + "'");
    double a = to_num(p[0], spec), b = to_num(p[1], spec), st = to_num(p[2], spec);
    if (!(st > 0) || !(b >= a)) throw ParseError(1, 1, "range needs a <= b and step > 0: '" + spec + "'");
    long k = std::lround((b - a) / st);
    if (std::fabs(a + k * st - b) > 1e-9 * std::max(1.0, std::fabs(b))) k = (long)std::floor((b - a) / st);
    std::vector<double> out;
    for (long i = 0; i <= k; ++i) out.push_back(a + st * (double)i);
    return out;
}

std::pair<double, double> parse_window(const std::string& spec) {
    auto p = split_colon(spec);
    if (p.size() != 2) throw ParseError(1, 1, "window must be a:b, got '" + spec + "'");
    double a = to_num(p[0], spec), b = to_num(p[1], spec);
    if (!(a < b)) throw ParseError(1, 1, "window needs a < b: '" + spec + "'");
    return {a, b};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Errc::Io, "cannot open '" + path + "' for writing");
    f << content;
    if (!f) fail(Errc::Io, "write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Errc::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace twlab::util
