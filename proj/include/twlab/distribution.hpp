#pragma once

#include <string>
#include <vector>

#include "twlab/auxsys.hpp"
#include "twlab/painleve2.hpp"

namespace twlab::dist {

// External argument T of F_6 corresponds to the internal t = 3^{2/3} T.
double internal_t(double T);
double external_t(double t);

// F_2(t) = exp(int_t^inf omega). Errc::OutOfRange below hm.t_min.
double eval_F2(const p2::Painleve2Solution& hm, double t);
double eval_logF2(const p2::Painleve2Solution& hm, double t);

// Regular: kappa u^{1/2} (1 - q2)/2 with the kappa quadrature of the auxiliary solution.
// Alpha: (1 - q2)/2 exp(int omega/3 + 2 alpha/3 - (u_s/u)(1 + q2)/3), fresh quadrature.
// Quotient: (q2 - 1)/(2 q2) exp(int omega/3 - (2/3)(u_s/u)(1 + q2)/q2); Errc::QZeroCrossing
// when q2 reaches 0 on [t, t_start].
enum class F6Form { Regular, Alpha, Quotient };

// All take the internal t and return F_6 at the external argument 3^{-2/3} t.
// Above aux.t_start the slaved decay of (q2 + 1, alpha) is used.
double eval_F6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t,
               F6Form form = F6Form::Regular);
double eval_logF6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t,
                  F6Form form = F6Form::Regular);
// d/dt log F_6(3^{-2/3} t) from the integrands; no differencing.
double dlogF6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t);

std::string provenance_hash(const p2::Painleve2Solution& hm);
std::string provenance_hash(const aux::AuxSolution& aux);

struct DistTable {
    int beta = 2;
    std::vector<double> t, F, logF, pdf;  // external argument
    std::string hm_hash, aux_hash;
    double aux_tol = 0;

    // Cubic Hermite in (F, pdf); clamped to the end values outside the grid.
    double cdf(double x) const;
    std::string to_csv() const;
    std::string metadata_json() const;
};

// t_grid uniform and strictly increasing with at least 5 nodes; pdf by five-point
// differences of F (one-sided at the ends). aux is required for beta = 6.
DistTable tabulate(int beta, const std::vector<double>& t_grid, const p2::Painleve2Solution& hm,
                   const aux::AuxSolution* aux = nullptr);

// Errc::OutOfSupportedRange if p is outside (F.front(), F.back()).
double quantile(const DistTable& table, double p);

}  // namespace twlab::dist
