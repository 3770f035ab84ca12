#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "twlab.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// FNV-1a 64, written out independently of the library
std::string fnv_hex(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

fs::path scratch(const char* name) {
    auto p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("version and key tables") {
    CHECK(std::string(twlab_version()).size() > 0);
    CHECK(twlab_config_key_count() == 20);
    CHECK(std::string(twlab_config_key(0)) == "command");
    CHECK(twlab_config_key(999) == nullptr);
    CHECK(twlab_command_count() == 8);
    CHECK(twlab_command_name(999) == nullptr);
}

TEST_CASE("solution handles") {
    twlab_hm* hm = twlab_hm_solve(-12.0, 8.0, 4001, 1e-11);
    REQUIRE(hm);
    double u = 0, ut = 0, om = 0;
    CHECK(twlab_hm_eval(hm, -8.0, &u, &ut, &om) == TWLAB_OK);
    CHECK(u == doctest::Approx(1.9995).epsilon(1e-4));
    CHECK(twlab_hm_eval(hm, 20.0, &u, nullptr, nullptr) == TWLAB_E_OUT_OF_RANGE);
    CHECK(twlab_last_error_code() == TWLAB_E_OUT_OF_RANGE);

    double f2 = 0, fr = 0;
    CHECK(twlab_F2(hm, -2.0, &f2) == TWLAB_OK);
    CHECK(twlab_fredholm_F2(-2.0, 60, &fr) == TWLAB_OK);
    CHECK(std::abs(f2 - fr) < 1e-8);

    twlab_aux* a = twlab_aux_solve(hm, 8.0, 1e-12, 0);
    REQUIRE(a);
    double q2 = 0, f6 = 0;
    CHECK(twlab_aux_q2(a, 8.0, &q2) == TWLAB_OK);
    CHECK(q2 == doctest::Approx(-1.0));
    CHECK(twlab_F6(hm, a, 0.0, &f6) == TWLAB_OK);
    CHECK(f6 > 0.0);
    CHECK(f6 < 1.0);
    CHECK(twlab_aux_solve(hm, 8.0, 1e-12, 5) == nullptr);
    CHECK(twlab_last_error_code() == TWLAB_E_DOMAIN);
    twlab_aux_free(a);
    twlab_hm_free(hm);

    double c0 = 0;
    CHECK(twlab_tail_constant(2.0, &c0) == TWLAB_OK);
    CHECK(c0 == doctest::Approx(-0.13654001117712).epsilon(1e-10));
}

TEST_CASE("errors are kept per thread") {
    twlab_clear_error();
    CHECK(twlab_last_error_code() == TWLAB_OK);
    CHECK(twlab_hm_solve(-5.0, 8.0, 4000, 1e-10) == nullptr);
    CHECK(twlab_last_error_code() == TWLAB_E_BAD_INTERVAL);
    auto j = nlohmann::json::parse(twlab_last_error_json());
    CHECK(j["error"]["code"] == "BadInterval");
    CHECK(twlab_F2(nullptr, 0.0, nullptr) == TWLAB_E_NULL_ARGUMENT);
    CHECK(twlab_fredholm_F2(-11.0, 60, nullptr) == TWLAB_E_NULL_ARGUMENT);
    double v;
    CHECK(twlab_fredholm_F2(-11.0, 60, &v) == TWLAB_E_DOMAIN);
    CHECK(std::string(twlab_last_error_message()).find("-10") != std::string::npos);
}

TEST_CASE("config handles") {
    twlab_config* c = twlab_config_new();
    REQUIRE(c);
    CHECK(twlab_config_set(c, "beta", "6") == TWLAB_OK);
    CHECK(std::string(twlab_config_get(c, "beta")) == "6");
    CHECK(twlab_config_set(c, "betta", "6") == TWLAB_E_PARSE);
    CHECK(twlab_config_get(c, "betta") == nullptr);
    twlab_config_free(c);

    CHECK(twlab_config_parse("command = tw-table\nbetta = 6\n") == nullptr);
    CHECK(twlab_last_error_code() == TWLAB_E_PARSE);
    auto j = nlohmann::json::parse(twlab_last_error_json());
    CHECK(j["error"]["line"] == 2);
    CHECK(j["error"]["column"] == 1);
    CHECK(twlab_config_load("/nonexistent/twlab.cfg") == nullptr);
    CHECK(twlab_last_error_code() == TWLAB_E_IO);
}

TEST_CASE("run exit codes") {
    auto out = scratch("twlab_capi_bad");
    twlab_config* c = twlab_config_parse("command = tw-table\nbeta = 4\n");
    REQUIRE(c);
    twlab_config_set(c, "out.dir", out.string().c_str());
    CHECK(twlab_run(c) == 2);
    CHECK(twlab_last_error_code() == TWLAB_E_CONFIG);
    CHECK(twlab_run(nullptr) == 2);
    twlab_config_free(c);
}

TEST_CASE("runs are deterministic and hashed") {
    std::string manifests[2], tables[2];
    for (int k = 0; k < 2; ++k) {
        auto out = scratch(k ? "twlab_capi_b" : "twlab_capi_a");
        twlab_config* c = twlab_config_new();
        twlab_config_set(c, "command", "fredholm-f2");
        twlab_config_set(c, "grid.t", "-6:2:0.5");
        twlab_config_set(c, "out.dir", out.string().c_str());
        CHECK(twlab_run(c) == 0);
        fs::path mp = twlab_last_manifest_path();
        CHECK(mp == out / "fredholm-f2.manifest.json");
        auto m = nlohmann::json::parse(slurp(mp));
        CHECK(m["status"] == "pass");
        REQUIRE(m["artifacts"].size() >= 1);
        for (const auto& a : m["artifacts"]) {
            std::string body = slurp(out / a["file"].get<std::string>());
            CHECK(a["bytes"] == body.size());
            CHECK(a["fnv1a64"].get<std::string>() == fnv_hex(body));
        }
        tables[k] = slurp(out / "fredholm_f2.csv");
        m.erase("config");
        m.erase("config_hash");
        manifests[k] = m["checks"].dump();
        twlab_config_free(c);
    }
    CHECK(tables[0] == tables[1]);
    CHECK(manifests[0] == manifests[1]);
}
