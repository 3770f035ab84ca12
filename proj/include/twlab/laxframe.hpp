#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <array>
#include <complex>
#include <vector>

#include "twlab/auxsys.hpp"
#include "twlab/painleve2.hpp"

namespace twlab::lax {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

// Stokes multipliers of the Painleve II x-equation.
struct StokesData {
    cplx s1{0.0, -1.0}, s2{0.0, 0.0}, s3{0.0, 1.0};

    static StokesData ablowitz_segur(double a);  // s2 = 0, s1 = -ia = -s3
    static StokesData hastings_mcleod() { return ablowitz_segur(1.0); }

    cplx cyclic_residual() const { return s1 - s2 + s3 + s1 * s2 * s3; }
    bool is_real_class(double tol = 1e-14) const;
    Matrix2 matrix(int k) const;  // S^(k), k = 1..6; Errc::Domain otherwise
    // Psi^(6) = Psi^(3) * link63()
    Matrix2 link63() const { return matrix(3) * matrix(4) * matrix(5); }
};

// Flaschka-Newell pair at one point.
std::pair<Matrix2, Matrix2> build_L0_B0(const p2::HmPoint& p, double x, double t);
std::pair<Matrix2, Matrix2> build_L0_B0(const p2::Painleve2Solution& hm, double x, double t);

// Rumanov pair from reconstructed parameters.
std::pair<Matrix2, Matrix2> build_rumanov_L_B(const aux::LaxParams& p, double x);

// dB/dx - dL/dt - [L, B] with t-derivatives by five-point differences.
Matrix2 zero_curvature_fn(const p2::Painleve2Solution& hm, double x, double t, double h = 1e-3);
Matrix2 zero_curvature_rumanov(const aux::AuxSolution& aux, const p2::Painleve2Solution& hm,
                               double x, double t, double h = 1e-3);

// Pair induced on Psi = e^theta kappa R G Psi0 by the gauge, G = e^{-i pi sigma3/2} u^{-sigma3/2}.
std::pair<Matrix2, Matrix2> gauge_induced_L_B(const aux::LaxParams& p, double x);

struct ScaledMatrix {
    Matrix2 m;
    double log_scale = 0.0;  // value = m * exp(log_scale)
};

// Psi = e^{x^3/6 - xt/2} kappa R e^{-i pi sigma3/2} u^{-sigma3/2} psi0. Errc::DegenerateGauge
// when det R = (1 - q2^2)/4 is below 1e-12 in magnitude.
ScaledMatrix gauge_psi(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double x,
                       double t, const Matrix2& psi0);

// Coefficients of the formal solution (I + m1/x + ...) e^{theta sigma3}, column by column:
// col 0 multiplies e^{theta}, col 1 multiplies e^{-theta}. Entry k is the x^{-k} coefficient.
std::array<std::vector<cplx>, 2> formal_column(int col, const p2::HmPoint& p, double t, int terms);
// Optimally truncated sum of the formal column at complex x.
std::array<cplx, 2> formal_column_value(int col, const p2::HmPoint& p, double t, cplx x,
                                        int max_terms = 14);

struct RowOptions {
    double x_far = 15.0;     // where the formal series seeds the recessive columns
    double max_step = 1.0 / 512.0;
    bool full = true;        // both columns; otherwise only column 2 of Psi^(6)
    double match_tol = 1e-8;
};

// One t-row of Y^(6)(x) = Psi0^(6) e^{-theta sigma3} on the given x nodes; theta is the ledger.
struct PsiRow {
    double t = 0;
    std::vector<double> x;
    std::vector<Matrix2> Y;  // column 0 left zero when !full
    std::vector<double> theta;
    double match_error = 0;   // left vs right value of Psi^(6) at x = 0 (relative)
    double stokes_error = 0;  // ray-built column 1 vs Stokes-linked one (full only)
    double det_drift = 0;     // max |det Y - 1| (full only)
    Matrix2 psi(std::size_t i) const;  // Y e^{theta sigma3}
};

PsiRow solve_psi0_row(const p2::Painleve2Solution& hm, const StokesData& stokes, double t,
                      const std::vector<double>& xs, const RowOptions& opt = {});

// Scalar fields on a rectangular (t, x) grid.
enum class FieldKind { Beta6, Beta2 };

struct FieldGrid {
    FieldKind kind = FieldKind::Beta6;
    std::vector<double> x, t;
    double hx = 0, ht = 0;
    std::vector<cplx> f;  // row-major in t
    double max_match_error = 0;
    cplx at(std::size_t it, std::size_t ix) const { return f[it * x.size() + ix]; }
    std::string to_csv() const;
};

// Beta6: Psi_11 from the (2,2)-column representation; Beta2: (Psi0^(6))_22 e^{theta + int omega}.
// The grid extends margin cells beyond [x_lo, x_hi] x [t_lo, t_hi].
FieldGrid build_field(const p2::Painleve2Solution& hm, const aux::AuxSolution* aux, FieldKind kind,
                      double x_lo, double x_hi, double t_lo, double t_hi, double h, int margin = 2,
                      const RowOptions& opt = {});

// Psi_11 at one point from column 2 of Y^(6).
cplx psi11_from_column(const aux::AuxState& st, const p2::HmPoint& p, double x, cplx y12, cplx y22);

struct PdeReport {
    double max_residual = 0;
    double x_at = 0, t_at = 0;
    double max_imag = 0;  // max |Im f| / max |f|
    std::size_t nodes = 0;
};

// max over nodes at least `margin` cells inside of |c_t f_t + f_xx + (t - x^2) f_x|, centered
// second-order differences. c_t = 3 for the internal beta = 6 variables, 1 for beta = 2.
PdeReport bv_pde_residual(const FieldGrid& g, double c_t, int margin = 2);

// WKB leading structure. With W = e^{-theta} Psi sigma1 e^{-theta sigma3} = i kappa R G Y^(6),
// x (R^{-1} W G^{-1} / (i kappa) - I) is compared with the (1,1), (1,2), (2,2) entries of M0.
// Returns the max entry error, which should decay like 1/x.
double wkb_defect(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double x, double t);

}  // namespace twlab::lax
