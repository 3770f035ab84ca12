#include "twlab/asymptotics.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <cmath>
#include <mutex>

#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"

namespace twlab::asym {

namespace {

// B_2 .. B_20
constexpr long double kBernoulli[] = {
    1.0L / 6,        -1.0L / 30,        1.0L / 42,       -1.0L / 30,         5.0L / 66,
    -691.0L / 2730,  7.0L / 6,          -3617.0L / 510,  43867.0L / 798,     -174611.0L / 330};

}  // namespace

double euler_gamma_series() {
    const int n = 20;
    long double h = 0;
    for (int k = n; k >= 1; --k) h += 1.0L / k;
    long double g = h - std::log((long double)n) - 1.0L / (2 * n);
    long double p = 1;
    for (int j = 1; j <= 8; ++j) {
        p *= (long double)n * n;
        g += kBernoulli[j - 1] / (2 * j * p);
    }
    return (double)g;
}

double zeta_prime_minus1_series() {
    const int n = 20;
    long double s = 0;
    for (int k = n; k >= 2; --k) s += k * std::log((long double)k);
    long double ln = std::log((long double)n), nn = (long double)n * n;
    long double logA = s - ((nn / 2 + n / 2.0L + 1.0L / 12) * ln - nn / 4);
    long double p = 1;
    for (int j = 2; j <= 9; ++j) {
        p *= nn;
        logA += kBernoulli[j - 1] / ((2.0L * j) * (2.0L * j - 1) * (2.0L * j - 2) * p);
    }
    return (double)(1.0L / 12 - logA);
}

double verify_constants() {
    return std::max(std::fabs(euler_gamma_series() - kEulerGamma),
                    std::fabs(zeta_prime_minus1_series() - kZetaPrimeMinus1));
}

TailModel tail_model(double beta) {
    if (!(beta > 0)) fail(Errc::Domain, "beta must be positive");
    TailModel m;
    m.beta = beta;
    m.cubic = -beta / 24.0;
    m.three_halves = std::sqrt(2.0) / 3.0 * (beta / 2.0 - 1.0);
    m.log_coef = (beta / 2.0 + 2.0 / beta - 3.0) / 8.0;
    m.c0 = eval_c0(beta);
    return m;
}

// (t/(e^t - 1) - 1 + t/2 - t^2/12) / (t^2 (e^{beta t/2} - 1))
double c0_integrand(double beta, double t) {
    if (t < 0.25) return c0_integrand_series(beta, t);
    return (t / std::expm1(t) - 1.0 + t / 2.0 - t * t / 12.0) / (t * t * std::expm1(beta * t / 2.0));
}

double c0_integrand_series(double beta, double t) {
    // t/(e^t - 1) = sum B_n t^n / n!, so the bracket starts at B_4 t^4 / 4!
    double t2 = t * t, num = 0.0, tp = t2, fact = 24.0;
    for (int j = 2; j <= 9; ++j) {
        num += (double)kBernoulli[j - 1] / fact * tp;
        tp *= t2;
        fact *= (2.0 * j + 1) * (2.0 * j + 2);
    }
    return num / std::expm1(beta * t / 2.0);
}

double eval_c0(double beta) {
    if (!(beta > 0)) fail(Errc::Domain, "beta must be positive");
    static std::once_flag once;
    static double verified = 0.0;
    std::call_once(once, [] { verified = verify_constants(); });
    if (verified > 1e-13)
        fail(Errc::Internal, fmt::format("hard-coded constants disagree with recomputation by {}", verified));

    auto f = [beta](double t) { return c0_integrand(beta, t); };
    auto integral = [&](int panels, int order) {
        double head = specfun::integrate_panels(f, 0.0, 2.0, panels, order);
        specfun::TailOptions opt;
        opt.order = order;
        return head + specfun::integrate_to_infinity(f, 2.0, 2.0 / beta, opt);
    };
    double I1 = integral(8, 12), I2 = integral(16, 20);
    if (std::fabs(I1 - I2) > 1e-12)
        fail(Errc::QuadratureFailure, fmt::format("c0 integral not converged ({} vs {})", I1, I2));

    double hb = beta / 2.0, ln2 = std::log(2.0);
    return hb * (1.0 / 12.0 - kZetaPrimeMinus1) + kEulerGamma / (6.0 * beta) -
           std::log(2.0 * M_PI) / 4.0 - 0.5 * std::log(hb) +
           (17.0 / 8.0 - 25.0 / 24.0 * (hb + 2.0 / beta)) * ln2 + I2;
}

double eval_tail_logF(const TailModel& m, double t) {
    if (!(t < 0)) fail(Errc::Domain, "tail model needs t < 0");
    double a = -t;
    return m.cubic * a * a * a + m.three_halves * std::pow(a, 1.5) + m.log_coef * std::log(a) + m.c0;
}

double eval_tail_dlogF(const TailModel& m, double t) {
    if (!(t < 0)) fail(Errc::Domain, "tail model needs t < 0");
    double a = -t;
    return -3.0 * m.cubic * a * a - 1.5 * m.three_halves * std::sqrt(a) + m.log_coef / t;
}

Extraction extract_constant(const std::function<double(double)>& logF, const TailModel& m,
                            std::pair<double, double> w, int samples) {
    auto [lo, hi] = w;
    if (!(lo < hi) || hi > -5.0)
        fail(Errc::Domain, fmt::format("extraction window [{}, {}] must satisfy t_lo < t_hi <= -5", lo, hi));
    if (samples < 3) fail(Errc::IllConditionedFit, "need at least 3 samples");
    Eigen::MatrixXd A(samples, 2);
    Eigen::VectorXd y(samples);
    TailModel known = m;
    known.c0 = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = lo + (hi - lo) * i / (samples - 1);
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(-t, -1.5);
        y(i) = logF(t) - eval_tail_logF(known, t);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    if (!(sv(1) > 1e-10 * sv(0)))
        fail(Errc::IllConditionedFit, fmt::format("window [{}, {}] too narrow for a two-term fit", lo, hi));
    Eigen::VectorXd c = svd.solve(y);
    Extraction e;
    e.c0_est = c(0);
    e.drift = c(1);
    e.residual = std::sqrt((A * c - y).squaredNorm() / samples);
    e.window = w;
    return e;
}

std::string QSqrt2::str() const {
    return fmt::format("{}/{} + {}/{} sqrt(2)", a.numerator(), a.denominator(), b.numerator(),
                       b.denominator());
}

std::array<QSqrt2, 3> exact_tail_coefficients(Rational beta) {
    if (beta <= 0) fail(Errc::Domain, "beta must be positive");
    Rational hb = beta / 2;
    return {QSqrt2{-beta / 24, 0}, QSqrt2{0, (hb - 1) / 3}, QSqrt2{(hb + 2 / beta - 3) / 8, 0}};
}

std::array<QSqrt2, 3> exact_beta6_integrated() {
    // d/dt log F_6 = (3/4) t^2 - sqrt(2) (-t)^{1/2} + 1/(24 t); for t < 0,
    // d/dt |t|^3 = -3 t^2 and d/dt |t|^{3/2} = -(3/2) (-t)^{1/2}
    QSqrt2 d2{Rational(3, 4), 0}, dh{0, Rational(-1)}, dl{Rational(1, 24), 0};
    return {QSqrt2{-d2.a / 3, -d2.b / 3}, QSqrt2{-dh.a * 2 / 3, -dh.b * 2 / 3}, dl};
}

}  // namespace twlab::asym
