#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twlab/painleve2.hpp"

namespace twlab::aux {

enum class Route { Linear, Nonlinear };

// Slaved: data at t_start follows the forced decay q2 + 1 ~ E u^2, alpha ~ A u^2
// of the linearized system. Canonical: the exact limit values (0,1,0) and
// (q2, alpha) = (-1, 0).
enum class InitialData { Slaved, Canonical };

struct AuxOptions {
    Route route = Route::Linear;
    InitialData init = InitialData::Slaved;
    double node_step = 1.0 / 512.0;
    double rescale_threshold = 1e100;
    double blowup = 1e8;
    double initial_scale = 1.0;  // multiplies (mu+, mu-, nu) at t_start
    // Nonlinear route only: replace the q2 equation by the one implied by b = e1 instead of
    // b = 2 e1 / 3. The result is not a solution; it serves as a negative control.
    bool control_b_equals_e1 = false;
};

struct AuxEvent {
    double t;
    std::string what;
};

struct AuxState {
    double q2;
    double eps;    // 1 + q2, carried separately for relative accuracy near t_start
    double alpha;
    double q1;
    double log_kappa;
    double log_kappa_sqrt_u;  // log(kappa u^(1/2)); 0 at t_start
};

class AuxSolution {
public:
    Route route = Route::Linear;
    InitialData init = InitialData::Slaved;
    double t_start = 0, t_end = 0, tol = 0;

    // nodes ascending in t
    std::vector<double> t;
    std::vector<double> mu_plus, mu_minus, nu, log_scale;  // linear route only
    std::vector<double> eps, alpha, q1;
    std::vector<double> log_kappa, log_kappa_sqrt_u;
    std::vector<AuxEvent> events;
    bool has_kappa = false;

    AuxState eval(double t) const;                        // Errc::OutOfRange
    double eps_t(double t) const;                         // slope of the eps interpolant
    double alpha_t(double t) const;
    std::string to_csv() const;

    // interpolation data (scaled by u^2 where noted)
    std::vector<double> eps_s, deps_s, alpha_s, dalpha_s;  // eps/u^2, alpha/u^2 and slopes
    std::vector<double> u2, dlogk, dg;                      // u^2 at nodes, kappa slopes
    std::shared_ptr<const p2::Painleve2Solution> hm;  // copy of the solution integrated against

private:
    std::size_t cell(double t) const;
};

AuxSolution integrate_linear(const p2::Painleve2Solution& hm, double t_start, double t_end,
                             double tol, const AuxOptions& opt = {});
AuxSolution integrate_nonlinear(const p2::Painleve2Solution& hm, double t_start, double t_end,
                                double tol, const AuxOptions& opt = {});
// Fills log_kappa by quadrature of the kappa equation from t_start.
AuxSolution compute_log_kappa(AuxSolution aux, const p2::Painleve2Solution& hm);

// Convenience: integrate and attach kappa in one call.
AuxSolution solve(const p2::Painleve2Solution& hm, double t_start, double t_end, double tol,
                  const AuxOptions& opt = {});

// Slaved initial coefficients (A, E) at t_start.
std::pair<double, double> slaved_coefficients(double t, double L);

struct LaxParams {
    double t;
    double u, ut, omega;
    double q2, eps, alpha, kappa_log;
    double q1, q0, e1, e2, e3, a, d, b, c, U;
    double U_def;  // 3(a + d) - t^2/2 from the finite-difference a, d
    double delta, w;  // w = -u_t
    double q2t, alpha_t, kt;  // finite-difference derivatives used above
};

// Parameters with only algebraic dependence on (q2, alpha, u, u_t, t); no a, d, b, c.
LaxParams algebraic_params(double t, double u, double ut, double eps, double alpha);

LaxParams reconstruct_params(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t,
                             double h = 1e-3);

struct RIntegrals {
    double r2, r1, r0, I0, I1, I2;
    double I0_def;     // I0 with U from 3(a+d) - t^2/2
    double r0_closed;  // omega + t^2/4 - (u_t/u)(1+q2)/2
};
RIntegrals eval_r_and_integrals(const LaxParams& p);

// Max |r2 + t/2| and |r1 - (1 + q2)/2| over random tuples drawn from q2 in [-0.95, 0.95],
// alpha in [-2.5, 2.5], u in [0.05, 2.5], u_t/u in [-3, 3], t in [-10, 8].
struct IdentityCheck {
    int count = 0;
    double r2 = 0, r1 = 0;
};
IdentityCheck random_identity_check(int count, std::uint64_t seed);

// The six compatibility equations, left minus right side, with d/dt by
// five-point differences of step h. Order: e1, e2, e3, q0, q1, q2.
std::array<double, 6> rumsys_residuals(const AuxSolution& aux, const p2::Painleve2Solution& hm,
                                       double t, double h = 1e-3);

struct EtaReport {
    double eta;
    double eta_residual;    // |9 eta'' + 9 eta eta' + eta^3 + P eta + Q|
    double f_residual;      // |27 f''' + 3 P f' + Q f| / |f| with f = exp(int eta / 3)
    double q2eq3_residual;  // second-order q2 equation
};
EtaReport eta_residual(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t,
                       double h);

// alpha recovered from the q2 trajectory alone.
double alpha_from_q2(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t,
                     double h = 1e-3);

}  // namespace twlab::aux
