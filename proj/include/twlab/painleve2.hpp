#pragma once

#include <string>
#include <vector>

namespace twlab::p2 {

struct HmPoint {
    double u;
    double ut;
    double omega;
};

// Hastings-McLeod solution on a uniform grid. Nodal data is stored exactly as
// solved; between nodes u is quintic Hermite in (u, u_t, u_tt) and u_t quintic
// Hermite in (u_t, u_tt, u_ttt), the higher derivatives taken from the ODE.
class Painleve2Solution {
public:
    Painleve2Solution() = default;
    Painleve2Solution(double t_min, double t_max, std::vector<double> u, std::vector<double> ut);

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    double step() const { return h_; }
    std::size_t size() const { return u_.size(); }
    double node(std::size_t i) const { return t_min_ + h_ * (double)i; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& ut() const { return ut_; }
    const std::vector<double>& omega() const { return om_; }

    HmPoint eval(double t) const;   // Errc::OutOfRange outside [t_min, t_max]
    double utt(double t) const;     // derivative of the u_t interpolant
    // Beyond t_max the solution is continued by Ai (relative error O(Ai^2));
    // below t_min by the t -> -inf series.
    HmPoint eval_extended(double t) const;

    // Integral of omega over [t, inf), tail beyond t_max from the Airy limit.
    double omega_tail_integral(double t) const;

    struct Residuals {
        double ode_midpoint;   // |u_tt - t u - 2u^3| at cell midpoints
        double omega_slope;    // |(w_{i+1}-w_i)/h - mean(u^2)| per cell
        double min_u;
    };
    Residuals residuals() const;

    int newton_iterations = 0;
    double final_update = 0.0;

    std::string to_csv() const;

private:
    std::size_t cell(double t) const;
    double t_min_ = 0, t_max_ = 0, h_ = 0;
    std::vector<double> u_, ut_, utt_, uttt_, om_;
    std::vector<double> om_cum_;  // integral of omega from node i to t_max
    double om_tail_ = 0.0;        // integral of omega from t_max to inf
};

struct SolveOptions {
    int max_iterations = 50;
};

Painleve2Solution solve_hastings_mcleod(double t_min, double t_max, int n, double tol,
                                        const SolveOptions& opt = {});

// Large negative t expansions and the second-branch q2 expansion.
enum class SeriesKind { U, DLogU, Omega, Q2, DLogF6 };

SeriesKind parse_series(const std::string& tag);  // Errc::UnknownSeries
const char* series_name(SeriesKind k);
int series_max_order(SeriesKind k);

// Sum of terms 0..order. Errc::OrderTooHigh, Errc::Domain for t > -5.
double eval_series(SeriesKind kind, double t, int order);
// The single term of index k (used as the "first omitted term").
double series_term(SeriesKind kind, double t, int k);

}  // namespace twlab::p2
