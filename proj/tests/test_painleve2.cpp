#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"

using namespace twlab;
using namespace twlab::p2;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

}  // namespace

TEST_CASE("right end follows Ai") {
    const auto& hm = fixtures::hm();
    CHECK(std::abs(hm.eval(6.0).u - specfun::airy(6.0).ai) < 1e-10);
    for (double t = 5.0; t <= 8.0; t += 0.25) CHECK(std::abs(hm.eval(t).u - specfun::airy(t).ai) < 1e-9);
}

TEST_CASE("left end follows the series") {
    const auto& hm = fixtures::hm();
    double s = eval_series(SeriesKind::U, -8.0, 5);
    CHECK(s == doctest::Approx(2.0 * (1.0 - 1.0 / 4096.0 - 73.0 / 128.0 * std::pow(8.0, -6))).epsilon(1e-7));
    CHECK(std::abs(hm.eval(-8.0).u - s) < 1e-6);
    for (double t = -12.0; t <= -8.0; t += 0.5) {
        double omitted = std::abs(series_term(SeriesKind::U, t, 6));
        CHECK(std::abs(hm.eval(t).u - eval_series(SeriesKind::U, t, 5)) <= 2.0 * omitted);
    }
}

TEST_CASE("residuals of the solved grid") {
    auto r = fixtures::hm().residuals();
    CHECK(r.omega_slope < 1e-7);
    CHECK(r.ode_midpoint < 1e-6);
    CHECK(r.min_u > 0.0);
}

TEST_CASE("nodes return stored values") {
    const auto& hm = fixtures::hm();
    for (std::size_t i : {std::size_t(0), std::size_t(17), hm.size() / 2, hm.size() - 1}) {
        auto p = hm.eval(hm.node(i));
        CHECK(p.u == hm.u()[i]);
        CHECK(p.ut == hm.ut()[i]);
        CHECK(p.omega == hm.omega()[i]);
    }
}

TEST_CASE("midpoints agree with a doubled grid") {
    const auto& hm = fixtures::hm();
    auto fine = solve_hastings_mcleod(-12.0, 8.0, 8001, 1e-11);
    double worst = 0;
    for (std::size_t i = 0; i + 1 < hm.size(); i += 37) {
        double t = hm.node(i) + 0.5 * hm.step();
        worst = std::max(worst, std::abs(hm.eval(t).u - fine.eval(t).u));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("u decreases on [-10, -5]") {
    const auto& hm = fixtures::hm();
    double prev = hm.eval(-10.0).u;
    for (double t = -9.9; t <= -5.0; t += 0.1) {
        double u = hm.eval(t).u;
        CHECK(u < prev);
        prev = u;
    }
}

TEST_CASE("eval outside the interval") {
    CHECK(code_of([] { fixtures::hm().eval(8.5); }) == Errc::OutOfRange);
    CHECK(code_of([] { fixtures::hm().eval(-12.5); }) == Errc::OutOfRange);
    // the extended evaluator continues with Ai
    CHECK(std::abs(fixtures::hm().eval_extended(10.0).u - specfun::airy(10.0).ai) < 1e-14);
}

TEST_CASE("series values") {
    CHECK(eval_series(SeriesKind::Omega, -10.0, 2) ==
          doctest::Approx(-25.0 - 1.0 / 80.0 - 9.0 / 64.0 * 1e-4).epsilon(1e-14));
    CHECK(eval_series(SeriesKind::DLogU, -10.0, 1) ==
          doctest::Approx(-1.0 / 20.0 - 3.0 / 8.0 * 1e-4).epsilon(1e-14));
    CHECK(eval_series(SeriesKind::U, -8.0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(parse_series("omega") == SeriesKind::Omega);
    CHECK(std::string(series_name(SeriesKind::DLogU)) == "dlogu");
}

TEST_CASE("series errors") {
    CHECK(code_of([] { parse_series("airy"); }) == Errc::UnknownSeries);
    CHECK(code_of([] { eval_series(SeriesKind::U, -10.0, series_max_order(SeriesKind::U) + 1); }) ==
          Errc::OrderTooHigh);
    CHECK(code_of([] { eval_series(SeriesKind::U, -4.0, 1); }) == Errc::Domain);
}

TEST_CASE("solver preconditions") {
    CHECK(code_of([] { solve_hastings_mcleod(-9.0, 8.0, 4000, 1e-10); }) == Errc::BadInterval);
    CHECK(code_of([] { solve_hastings_mcleod(-12.0, 5.0, 4000, 1e-10); }) == Errc::BadInterval);
    CHECK(code_of([] { solve_hastings_mcleod(-12.0, 8.0, 1000, 1e-10); }) == Errc::BadInterval);
}
