#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twlab/errors.hpp"

using namespace twlab;
using namespace twlab::aux;

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

TEST_CASE("canonical data at t_start") {
    AuxOptions o;
    o.init = InitialData::Canonical;
    auto a = integrate_linear(fixtures::hm(), 8.0, -10.0, 1e-12, o);
    auto s = a.eval(8.0);
    CHECK(s.q2 == -1.0);
    CHECK(s.q1 == 0.0);
    CHECK(s.alpha == 0.0);
}

TEST_CASE("slaved data starts next to the canonical limit") {
    auto s = fixtures::aux_linear().eval(8.0);
    CHECK(std::abs(s.q2 + 1.0) < 1e-10);
    CHECK(std::abs(s.alpha) < 1e-10);
    CHECK(std::abs(s.log_kappa_sqrt_u) < 1e-9);
}

TEST_CASE("q2 at t = -8 against the second-branch series") {
    double q = fixtures::aux_linear().eval(-8.0).q2;
    double ref = std::pow(8.0, -1.5) / std::sqrt(2.0) + 21.0 / 8.0 * std::pow(8.0, -3) +
                 1707.0 / (64.0 * std::sqrt(2.0)) * std::pow(8.0, -4.5);
    CHECK(std::abs(q - ref) <= 0.1 * std::abs(ref));
}

TEST_CASE("linear route is invariant under rescaled initial data") {
    AuxOptions o;
    o.initial_scale = 7.0;
    auto a7 = integrate_linear(fixtures::hm(), 8.0, -10.0, 1e-12, o);
    auto a1 = integrate_linear(fixtures::hm(), 8.0, -10.0, 1e-12);
    for (double t = -10.0; t <= 8.0; t += 0.5) {
        CHECK(std::abs(a7.eval(t).q2 - a1.eval(t).q2) < 1e-12);
        CHECK(std::abs(a7.eval(t).q1 - a1.eval(t).q1) < 1e-12);
    }
}

TEST_CASE("routes agree") {
    const auto& lin = fixtures::aux_linear();
    const auto& non = fixtures::aux_nonlinear();
    double worst = 0;
    for (double t = -10.0; t <= 8.0; t += 1.0 / 16) worst = std::max(worst, std::abs(lin.eval(t).q2 - non.eval(t).q2));
    CHECK(worst <= 1e-8);
}

TEST_CASE("alpha recovered from q2") {
    const auto& a = fixtures::aux_nonlinear();
    for (double t : {-9.0, -6.0, -2.0, 0.0, 3.0})
        CHECK(std::abs(alpha_from_q2(a, fixtures::hm(), t) - a.eval(t).alpha) < 1e-7);
}

TEST_CASE("kappa normalisation and start-point robustness") {
    const auto& hm = fixtures::hm();
    const auto& a8 = fixtures::aux_linear();
    auto s = a8.eval(8.0);
    CHECK(std::abs(std::exp(s.log_kappa_sqrt_u) - 1.0) < 1e-9);
    // d/dt log kappa + (1/2) d/dt log u -> 0 at t_start
    double h = 1e-3;
    double slope = (a8.eval(8.0).log_kappa_sqrt_u - a8.eval(8.0 - h).log_kappa_sqrt_u) / h;
    CHECK(std::abs(slope) < 1e-6);
    auto hm9 = p2::solve_hastings_mcleod(-12.0, 9.0, 4201, 1e-11);
    auto a9 = solve(hm9, 9.0, -12.0, 1e-12);
    for (double t = -8.0; t <= 6.0; t += 0.5) CHECK(std::abs(a9.eval(t).log_kappa - a8.eval(t).log_kappa) < 1e-7);
    (void)hm;
}

TEST_CASE("reconstructed parameters obey the constraints") {
    const auto& hm = fixtures::hm();
    auto p = reconstruct_params(fixtures::aux_linear(), hm, -4.0);
    CHECK(std::abs(p.b - 2.0 / 3.0 * p.e1) <= 1e-7);
    CHECK(std::abs(p.c + p.e2 / 3.0) <= 1e-7);
    CHECK(std::abs(p.a - p.d - p.q2 * (p.b - p.e1) - p.q1) < 1e-12 * (1.0 + std::abs(p.a)));
    auto q = reconstruct_params(fixtures::aux_linear(), hm, 7.9);
    CHECK(std::abs(q.q0 - 7.9) < 1e-6);
}

TEST_CASE("r functions and integrals") {
    auto chk = random_identity_check(1000, 7);
    CHECK(chk.count == 1000);
    CHECK(chk.r2 <= 1e-12);
    CHECK(chk.r1 <= 1e-12);
    const auto& hm = fixtures::hm();
    for (double t : {-9.0, -5.0, -1.0, 2.0, 6.0}) {
        auto r = eval_r_and_integrals(reconstruct_params(fixtures::aux_linear(), hm, t));
        CHECK(std::abs(r.I0) <= 1e-8);
        CHECK(std::abs(r.I1) <= 1e-10);
        CHECK(std::abs(r.I2) <= 1e-10);
        CHECK(std::abs(r.r0 - r.r0_closed) <= 1e-10 * (1.0 + std::abs(r.r0)));
    }
}

TEST_CASE("compatibility equations along the trajectory") {
    const auto& hm = fixtures::hm();
    for (double t : {-9.0, -4.0, 0.0, 5.0}) {
        auto r = rumsys_residuals(fixtures::aux_linear(), hm, t);
        for (double v : r) CHECK(std::abs(v) <= 1e-6);
    }
}

TEST_CASE("eta equation") {
    const auto& hm = fixtures::hm();
    const auto& a = fixtures::aux_linear();
    auto r = eta_residual(a, hm, -4.0, 1e-3);
    CHECK(r.eta_residual <= 1e-4);
    CHECK(r.q2eq3_residual <= 1e-4);
    // second order until the interpolation floor (~1e-7) is reached
    auto r1 = eta_residual(a, hm, -4.0, 4e-3);
    auto r2 = eta_residual(a, hm, -4.0, 2e-3);
    CHECK(r1.eta_residual / r2.eta_residual == doctest::Approx(4.0).epsilon(0.25));
    CHECK(code_of([&] { eta_residual(a, hm, 7.999, 1e-3); }) == Errc::BadInterval);
}

TEST_CASE("argument checks") {
    const auto& hm = fixtures::hm();
    CHECK(code_of([&] { integrate_linear(hm, 0.0, 1.0, 1e-12); }) == Errc::BadInterval);
    CHECK(code_of([&] { integrate_linear(hm, 8.0, -13.0, 1e-12); }) == Errc::BadInterval);
    CHECK(code_of([&] { integrate_linear(hm, 8.0, -10.0, 0.0); }) == Errc::Domain);
    AuxOptions o;
    o.control_b_equals_e1 = true;
    CHECK(code_of([&] { integrate_linear(hm, 8.0, -10.0, 1e-12, o); }) == Errc::Domain);
    CHECK(code_of([&] { fixtures::aux_linear().eval(9.0); }) == Errc::OutOfRange);
    CHECK(code_of([] { algebraic_params(0.0, 1.0, 0.1, 2.0, 0.0); }) == Errc::DegenerateQ2);
}
