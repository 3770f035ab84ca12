#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twlab/asymptotics.hpp"
#include "twlab/distribution.hpp"
#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"

using namespace twlab;
using namespace twlab::asym;

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

TEST_CASE("hard-coded constants reproduce") {
    CHECK(verify_constants() < 1e-14);
    CHECK(std::abs(euler_gamma_series() - kEulerGamma) < 1e-14);
    CHECK(std::abs(zeta_prime_minus1_series() - kZetaPrimeMinus1) < 1e-14);
}

TEST_CASE("c0 at the classical values") {
    const double ln2 = std::log(2.0), z = kZetaPrimeMinus1;
    CHECK(std::abs(eval_c0(1.0) - (-11.0 / 48.0 * ln2 + z / 2.0)) < 1e-10);
    CHECK(std::abs(eval_c0(2.0) - (ln2 / 24.0 + z)) < 1e-10);
    // beta = 4 in the variable of the general formula: the classical -35/48 log 2 shifts by
    // -(1/24) log 2 under the 2^{2/3} rescaling of the argument
    CHECK(std::abs(eval_c0(4.0) - (-37.0 / 48.0 * ln2 + z / 2.0)) < 1e-10);
    MESSAGE("c0(6) = " << eval_c0(6.0));
}

TEST_CASE("small-t branch of the c0 integrand") {
    for (double beta : {1.0, 2.0, 6.0}) {
        // extended precision for the cancelling bracket
        long double t = 1e-2L, b = beta;
        long double direct = (t / std::expm1(t) - 1.0L + t / 2.0L - t * t / 12.0L) / (t * t * std::expm1(b * t / 2.0L));
        CHECK(std::abs(c0_integrand_series(beta, 1e-2) - (double)direct) <= 1e-10);
        CHECK(std::isfinite(c0_integrand(beta, 1e-9)));
    }
}

TEST_CASE("beta = 6 tail coefficients") {
    auto m = tail_model(6.0);
    CHECK(m.cubic == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(m.three_halves == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-15));
    CHECK(m.log_coef == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    auto e = exact_tail_coefficients(Rational(6));
    CHECK(e == exact_beta6_integrated());
    CHECK(e[0] == QSqrt2{Rational(-1, 4), Rational(0)});
    CHECK(e[1] == QSqrt2{Rational(0), Rational(2, 3)});
    CHECK(e[2] == QSqrt2{Rational(1, 24), Rational(0)});
    auto two = exact_tail_coefficients(Rational(2));
    CHECK(two[0] == QSqrt2{Rational(-1, 12), Rational(0)});
    CHECK(two[1] == QSqrt2{Rational(0), Rational(0)});
    CHECK(two[2] == QSqrt2{Rational(-1, 8), Rational(0)});
}

TEST_CASE("derivative form and integration") {
    auto m = tail_model(6.0);
    double t = -8.0;
    CHECK(std::abs(eval_tail_dlogF(m, t) - (0.75 * t * t - std::sqrt(2.0) * std::sqrt(-t) + 1.0 / (24.0 * t))) <
          1e-12);
    auto rule = specfun::gauss_legendre(30, -9.0, -5.0);
    double I = rule.integrate([&](double s) { return eval_tail_dlogF(m, s); });
    CHECK(std::abs(I - (eval_tail_logF(m, -5.0) - eval_tail_logF(m, -9.0))) < 1e-11);
}

TEST_CASE("extraction") {
    auto m = tail_model(6.0);
    auto shifted = [&](double t) { return eval_tail_logF(m, t) + 0.3; };
    auto ex = extract_constant(shifted, m, {-9.0, -6.0});
    CHECK(std::abs(ex.c0_est - (m.c0 + 0.3)) < 1e-12);
    CHECK(std::abs(ex.drift) < 1e-10);

    const auto& hm = fixtures::hm();
    auto m2 = tail_model(2.0);
    auto x2 = extract_constant([&](double t) { return dist::eval_logF2(hm, t); }, m2, {-9.0, -7.0});
    CHECK(std::abs(x2.c0_est - eval_c0(2.0)) <= 5e-3);
}

TEST_CASE("argument checks") {
    auto m = tail_model(2.0);
    CHECK(code_of([] { tail_model(0.0); }) == Errc::Domain);
    CHECK(code_of([] { eval_c0(-1.0); }) == Errc::Domain);
    CHECK(code_of([&] { eval_tail_logF(m, 1.0); }) == Errc::Domain);
    auto f = [&](double t) { return eval_tail_logF(m, t); };
    CHECK(code_of([&] { extract_constant(f, m, {-6.0, -4.0}); }) == Errc::Domain);
    CHECK(code_of([&] { extract_constant(f, m, {-8.0, -6.0}, 2); }) == Errc::IllConditionedFit);
}
