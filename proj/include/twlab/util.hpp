#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace twlab::util {

// 17 significant digits, round-trip safe.
std::string fmt17(double v);
std::string csv_row(std::initializer_list<double> vals);
std::string csv_row(const std::vector<double>& vals);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

std::uint64_t splitmix64(std::uint64_t& state);

// Worker count from TWLAB_THREADS, falling back to hardware concurrency.
int worker_count();

// "a:b:step" -> inclusive grid; Errc::ParseError on malformed input.
std::vector<double> parse_range(const std::string& spec);
// "a:b" -> pair
std::pair<double, double> parse_window(const std::string& spec);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace twlab::util
