#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "twlab/distribution.hpp"
#include "twlab/errors.hpp"
#include "twlab/laxframe.hpp"

using namespace twlab;
using namespace twlab::lax;

namespace {

double max_abs(const Matrix2& m) { return m.cwiseAbs().maxCoeff(); }

// F at external (X, T) from the beta = 6 column representation
cplx field6(double X, double T) {
    const auto& hm = fixtures::hm_wide();
    const auto& a = fixtures::aux_wide();
    double x = X / std::cbrt(3.0), t = dist::internal_t(T);
    auto row = solve_psi0_row(hm, StokesData::hastings_mcleod(), t, {x});
    return psi11_from_column(a.eval(t), hm.eval_extended(t), x, row.Y[0](0, 1), row.Y[0](1, 1));
}

}  // namespace

TEST_CASE("Flaschka-Newell pair") {
    const auto& hm = fixtures::hm();
    for (double t : {-6.0, -1.0, 2.5})
        for (double x : {-3.0, 0.0, 1.7}) {
            auto [L, B] = build_L0_B0(hm, x, t);
            CHECK(std::abs(L.trace()) < 1e-15);
            CHECK(std::abs(B.trace()) < 1e-15);
            CHECK(max_abs(zero_curvature_fn(hm, x, t)) <= 1e-7);
        }
    auto [L, B] = build_L0_B0(p2::HmPoint{0.0, 0.0, 0.0}, 2.0, 1.0);
    CHECK(L(0, 0).real() == doctest::Approx(1.5));
    CHECK(L(1, 1).real() == doctest::Approx(-1.5));
    CHECK(std::abs(L(0, 1)) == 0.0);
    CHECK(std::abs(L(1, 0)) == 0.0);
}

TEST_CASE("Rumanov pair structure") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        aux::LaxParams p{};
        p.t = U(rng);
        p.q2 = 0.9 * U(rng) / 2.0;
        p.q1 = U(rng), p.q0 = U(rng), p.e1 = U(rng), p.e2 = U(rng), p.e3 = U(rng);
        p.a = U(rng), p.b = U(rng), p.c = U(rng), p.U = U(rng);
        p.d = (p.U + p.t * p.t / 2.0) / 3.0 - p.a;  // U = 3(a + d) - t^2/2
        double x = U(rng);
        auto [L, B] = build_rumanov_L_B(p, x);
        CHECK(std::abs(B.trace() - (-x + p.t * p.t / 6.0 + p.U / 3.0)) < 1e-13);
        auto [L1, B1] = build_rumanov_L_B(p, 1.0);
        auto [Lm, Bm] = build_rumanov_L_B(p, -1.0);
        CHECK(std::abs((L1(1, 0) - Lm(1, 0)).real() / 2.0 - (1.0 - p.q2 * p.q2) / 4.0) < 1e-14);
        (void)L;
    }
}

TEST_CASE("Rumanov zero curvature on the trajectory") {
    for (double x : {-2.0, 0.0, 2.0})
        CHECK(max_abs(zero_curvature_rumanov(fixtures::aux_linear(), fixtures::hm(), x, -4.0)) <= 1e-6);
}

TEST_CASE("gauge reproduces the Rumanov pair") {
    const auto& hm = fixtures::hm();
    for (double t : {-3.0, 0.5})
        for (double x : {-1.0, 2.0}) {
            auto p = aux::reconstruct_params(fixtures::aux_linear(), hm, t);
            auto [L, B] = build_rumanov_L_B(p, x);
            auto [Lg, Bg] = gauge_induced_L_B(p, x);
            CHECK(max_abs(L - Lg) <= 1e-6);
            CHECK(max_abs(B - Bg) <= 1e-6);
        }
}

TEST_CASE("Stokes data") {
    auto s = StokesData::hastings_mcleod();
    CHECK(std::abs(s.cyclic_residual()) == 0.0);
    CHECK(s.is_real_class());
    for (double a : {1.0, 0.4}) {
        auto as = StokesData::ablowitz_segur(a);
        Matrix2 p = as.matrix(3) * as.matrix(4);
        CHECK(std::abs(p(0, 0) - 1.0) < 1e-15);
        CHECK(std::abs(p(0, 1) + a) < 1e-15);
        CHECK(std::abs(p(1, 0) - a) < 1e-15);
        CHECK(std::abs(p(1, 1) - (1.0 - a * a)) < 1e-15);
    }
    try {
        s.matrix(7);
        FAIL("expected Domain");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Domain);
    }
}

TEST_CASE("psi0 rows keep the determinant") {
    std::vector<double> xs;
    for (int i = -24; i <= 24; ++i) xs.push_back(0.25 * i);
    for (double t : {-5.0, 0.0}) {
        auto row = solve_psi0_row(fixtures::hm(), StokesData::hastings_mcleod(), t, xs);
        CHECK(row.det_drift <= 1e-8);
        CHECK(row.match_error <= 1e-8);
    }
}

TEST_CASE("beta = 2 bootstrap") {
    // Y22(x) -> 1 as x -> inf, so Y22 e^{int omega} -> F2; extrapolate in 1/x.
    const auto& hm = fixtures::hm();
    double t = -2.0;
    std::vector<double> xs = {10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    RowOptions o;
    o.full = false;
    auto row = solve_psi0_row(hm, StokesData::hastings_mcleod(), t, xs, o);
    Eigen::MatrixXd A(xs.size(), xs.size());
    Eigen::VectorXd y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t k = 0; k < xs.size(); ++k) A(i, k) = std::pow(1.0 / xs[i], (double)k);
        y(i) = row.Y[i](1, 1).real();
    }
    double limit = A.colPivHouseholderQr().solve(y)(0);
    double F2 = limit * std::exp(hm.omega_tail_integral(t));
    CHECK(std::abs(F2 - dist::eval_F2(hm, t)) <= 1e-7);
}

TEST_CASE("gauge determinant bookkeeping") {
    const auto& hm = fixtures::hm();
    const auto& a = fixtures::aux_linear();
    double x = 0.7, t = -1.5;
    Matrix2 psi0;
    psi0 << cplx(1.0, 0.2), cplx(0.3, -0.1), cplx(-0.4, 0.5), cplx(2.0, 0.0);
    auto g = gauge_psi(hm, a, x, t, psi0);
    auto st = a.eval(t);
    cplx lhs = g.m.determinant() * std::exp(2.0 * g.log_scale);
    double theta = x * x * x / 6.0 - x * t / 2.0;
    cplx rhs = std::exp(2.0 * theta + 2.0 * st.log_kappa) * (1.0 - st.q2 * st.q2) / 4.0 * psi0.determinant();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    try {
        gauge_psi(hm, a, x, 8.0, psi0);
        FAIL("expected DegenerateGauge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateGauge);
    }
}

TEST_CASE("WKB defect decays like 1/x") {
    double d20 = wkb_defect(fixtures::hm(), fixtures::aux_linear(), 20.0, -1.0);
    double d40 = wkb_defect(fixtures::hm(), fixtures::aux_linear(), 40.0, -1.0);
    CHECK(d20 / d40 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("PDE residual and negative control on a coarse grid") {
    const auto& hm = fixtures::hm();
    auto g1 = build_field(hm, &fixtures::aux_linear(), FieldKind::Beta6, -2.0, 2.0, -3.0, 0.0, 1.0 / 16);
    auto g2 = build_field(hm, &fixtures::aux_linear(), FieldKind::Beta6, -2.0, 2.0, -3.0, 0.0, 1.0 / 32);
    auto r1 = bv_pde_residual(g1, 3.0), r2 = bv_pde_residual(g2, 3.0);
    CHECK(r2.max_residual <= 4e-3);
    CHECK(r1.max_residual / r2.max_residual == doctest::Approx(4.0).epsilon(0.125));
    CHECK(r2.max_imag < 1e-10);

    aux::AuxOptions o;
    o.route = aux::Route::Nonlinear;
    o.control_b_equals_e1 = true;
    auto bad = aux::solve(hm, 8.0, -12.0, 1e-12, o);
    auto gb = build_field(hm, &bad, FieldKind::Beta6, -2.0, 2.0, -3.0, 0.0, 1.0 / 32);
    // the 1e3 inflation at h = 1/64 on the full box is an acceptance criterion
    CHECK(bv_pde_residual(gb, 3.0).max_residual >= 1e2 * r2.max_residual);

    auto f2 = build_field(hm, nullptr, FieldKind::Beta2, -2.0, 2.0, -3.0, 0.0, 1.0 / 32);
    CHECK(bv_pde_residual(f2, 1.0).max_residual <= 4e-3);
    CHECK_THROWS_AS(build_field(hm, nullptr, FieldKind::Beta6, -2.0, 2.0, -3.0, 0.0, 1.0 / 32), Error);
}

TEST_CASE("boundary values of the beta = 6 field") {
    CHECK(std::abs(field6(6.0, 4.0) - 1.0) <= 1e-4);
    CHECK(std::abs(field6(-6.0, 0.0)) <= 1e-4);
}
