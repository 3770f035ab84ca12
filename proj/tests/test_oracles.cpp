#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twlab/distribution.hpp"
#include "twlab/errors.hpp"
#include "twlab/oracles.hpp"

using namespace twlab;
using namespace twlab::oracle;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

TEST_CASE("Fredholm determinant") {
    // 1 - F2(6) is itself about 4e-12 (the kernel trace), so the limit is checked against
    // the Painleve value as well
    CHECK(std::abs(airy_kernel_fredholm(6.0) - 1.0) <= 1e-11);
    CHECK(std::abs(airy_kernel_fredholm(6.0) - dist::eval_F2(fixtures::hm(), 6.0)) <= 1e-13);
    CHECK(std::abs(airy_kernel_fredholm(10.0) - 1.0) <= 1e-15);
    CHECK(std::abs(airy_kernel_fredholm(-4.0, 40) - airy_kernel_fredholm(-4.0, 80)) <= 1e-10);
    double ref = airy_kernel_fredholm(-6.0, 120);
    double e40 = std::abs(airy_kernel_fredholm(-6.0, 40) - ref);
    double e80 = std::abs(airy_kernel_fredholm(-6.0, 80) - ref);
    CHECK(e80 <= std::max(1e-3 * e40, 1e-14));
    for (double t : {-8.0, -4.0, 0.0, 4.0})
        CHECK(std::abs(airy_kernel_fredholm(t) - dist::eval_F2(fixtures::hm(), t)) <= 1e-8);
}

TEST_CASE("Airy kernel diagonal") {
    double x = 0.7;
    CHECK(std::abs(airy_kernel(x, x) - airy_kernel(x, x + 1e-5)) < 1e-5);
}

TEST_CASE("Fredholm arguments") {
    CHECK(code_of([] { airy_kernel_fredholm(0.0, 39); }) == Errc::Domain);
    CHECK(code_of([] { airy_kernel_fredholm(-10.5); }) == Errc::Domain);
}

TEST_CASE("chi variates") {
    for (double k : {5.0, 50.0, 500.0}) {
        auto rng = sample_stream(11, (std::uint64_t)k);
        const int N = 20000;
        double s = 0.0;
        for (int i = 0; i < N; ++i) s += std::pow(draw_chi(rng, k), 2);
        CHECK(std::abs(s / N - k) <= 3.0 * std::sqrt(2.0 * k / N));
    }
}

TEST_CASE("largest eigenvalue by bisection") {
    const int n = 30;
    std::vector<double> d(n, 0.0), e(n - 1, 1.0);
    CHECK(std::abs(largest_eigenvalue(d, e) - 2.0 * std::cos(M_PI / (n + 1))) < 1e-12);
    CHECK(code_of([] { largest_eigenvalue({1.0, 2.0}, {1.0, 1.0}); }) == Errc::Domain);
}

TEST_CASE("edge samples are reproducible") {
    auto a = sample_edge(100, 6.0, 200, 42);
    auto b = sample_edge(100, 6.0, 200, 42);
    CHECK(a.samples == b.samples);
    CHECK(a.samples.size() == 200);
    auto c = sample_edge(100, 6.0, 200, 43);
    CHECK(a.samples != c.samples);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(a.samples[i] ==
              doctest::Approx(std::sqrt(2.0) * std::pow(100.0, 1.0 / 6.0) * (a.lambda_max[i] - std::sqrt(200.0))));
}

TEST_CASE("edge sampling arguments") {
    CHECK(code_of([] { sample_edge(49, 2.0, 10, 1); }) == Errc::Domain);
    CHECK(code_of([] { sample_edge(100, 0.0, 10, 1); }) == Errc::Domain);
    CHECK(code_of([] { sample_edge(100, 2.0, 0, 1); }) == Errc::Domain);
}

TEST_CASE("KS distance") {
    CHECK(ks_distance({0.0}, logistic) == doctest::Approx(0.5));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> x(10000);
    for (auto& v : x) {
        double p = U(rng);
        v = std::log(p / (1.0 - p));
    }
    CHECK(ks_distance(x, logistic) < 0.03);
    double gap = 0.0;
    for (double t = -10.0; t <= 10.0; t += 1e-3) gap = std::max(gap, logistic(t) - logistic(t - 1.0));
    double shifted = ks_distance(x, [](double t) { return logistic(t - 1.0); });
    CHECK(std::abs(shifted - gap) < 0.03);
    CHECK(code_of([] { ks_distance({}, logistic); }) == Errc::Domain);
}
