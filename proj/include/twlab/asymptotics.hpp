#pragma once

#include <array>
#include <boost/rational.hpp>
#include <functional>
#include <string>
#include <utility>

namespace twlab::asym {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082;
inline constexpr double kZetaPrimeMinus1 = -0.165421143700450929213919660243;

// Independent recomputations: gamma by Euler-Maclaurin on the harmonic sum, zeta'(-1) as
// 1/12 - log A with the Glaisher constant from Euler-Maclaurin on sum k log k.
double euler_gamma_series();
double zeta_prime_minus1_series();
// max |hard-coded - recomputed| over both constants
double verify_constants();

// log F_beta(t) ~ cubic |t|^3 + three_halves |t|^{3/2} + log_coef log|t| + c0, t -> -inf.
struct TailModel {
    double beta = 2;
    double cubic = 0, three_halves = 0, log_coef = 0;
    double c0 = 0;
    double t_cut = -4;  // validity: t <= t_cut
};

TailModel tail_model(double beta);  // Errc::Domain for beta <= 0

// Integrand of the c0 integral and its small-t series branch (used below t = 0.25, where the
// bracket loses digits to cancellation).
double c0_integrand(double beta, double t);
double c0_integrand_series(double beta, double t);

// Errc::Domain for beta <= 0, Errc::QuadratureFailure if panel refinement disagrees.
double eval_c0(double beta);

double eval_tail_logF(const TailModel& m, double t);   // Errc::Domain for t >= 0
double eval_tail_dlogF(const TailModel& m, double t);  // d/dt of the above

struct Extraction {
    double c0_est = 0;
    double drift = 0;     // amplitude of the |t|^{-3/2} term
    double residual = 0;  // rms misfit
    std::pair<double, double> window;
};

// Least squares of logF - known terms against const + A |t|^{-3/2} on `samples` uniform
// points. Errc::Domain unless t_lo < t_hi <= -5; Errc::IllConditionedFit for a degenerate window.
Extraction extract_constant(const std::function<double(double)>& logF, const TailModel& m,
                            std::pair<double, double> window, int samples = 41);

// Exact coefficients a + b sqrt(2).
using Rational = boost::rational<long long>;
struct QSqrt2 {
    Rational a{0}, b{0};
    bool operator==(const QSqrt2& o) const { return a == o.a && b == o.b; }
    std::string str() const;
};

// From the general-beta formula at rational beta.
std::array<QSqrt2, 3> exact_tail_coefficients(Rational beta);
// From integrating the beta = 6 derivative form: (-1/4, 2 sqrt(2)/3, 1/24).
std::array<QSqrt2, 3> exact_beta6_integrated();

}  // namespace twlab::asym
