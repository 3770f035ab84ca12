#include "twlab/painleve2.hpp"

#include <algorithm>
#include <cmath>

#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"
#include "twlab/util.hpp"
#include "interp.hpp"

namespace twlab::p2 {

namespace {

struct Term {
    long long num;
    long long den;
    int sqrt2;   // coefficient multiplied by 2^(sqrt2/2)
    int halves;  // power of (-t) in halves
};

// Coefficients exactly as printed for the t -> -inf expansions.
const std::vector<Term>& table(SeriesKind k) {
    static const std::vector<Term> u = {
        {1, 1, -1, 1},
        {-1, 8, -1, -5},
        {-73, 128, -1, -11},
        {-10657, 1024, -1, -17},
        {-13912277, 32768, -1, -23},
        {-8045883943LL, 262144, -1, -29},
        {-14518451390349LL, 4194304, -1, -35},
    };
    static const std::vector<Term> dlogu = {
        {-1, 2, 0, -2},
        {-3, 8, 0, -8},
        {-111, 32, 0, -14},
        {-1509, 16, 0, -20},
        {-2617599, 512, 0, -26},
        {-944695983LL, 2048, 0, -32},
        {-127756233309LL, 2048, 0, -38},
    };
    static const std::vector<Term> omega = {
        {-1, 4, 0, 4},
        {-1, 8, 0, -2},
        {-9, 64, 0, -8},
        {-189, 128, 0, -14},
        {-21663, 512, 0, -20},
        {-4825971, 2048, 0, -26},
        {-3540311739LL, 16384, 0, -32},
        {-241980297111LL, 8192, 0, -38},
    };
    static const std::vector<Term> q2 = {
        {1, 1, -1, -3},
        {21, 8, 0, -6},
        {1707, 64, -1, -9},
    };
    static const std::vector<Term> dlogf6 = {
        {1, 12, 0, 4},
        {-1, 3, 1, 1},
        {-1, 24, 0, -2},
    };
    switch (k) {
        case SeriesKind::U: return u;
        case SeriesKind::DLogU: return dlogu;
        case SeriesKind::Omega: return omega;
        case SeriesKind::Q2: return q2;
        case SeriesKind::DLogF6: return dlogf6;
    }
    return u;
}

double term_value(const Term& tm, double t) {
    double m = -t;
    double c = (double)tm.num / (double)tm.den * std::pow(2.0, 0.5 * tm.sqrt2);
    return c * std::pow(m, 0.5 * tm.halves);
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(t + 1.0)); }

double initial_guess(double t) {
    double w = logistic(t);
    double left = t < 0 ? std::sqrt(-t / 2.0) : 0.0;
    double right = t > specfun::kAiryMin ? specfun::airy(t).ai : 0.0;
    return w * left + (1.0 - w) * right;
}

using detail::hermite;
using detail::hermite_d;
using detail::quintic;
using detail::quintic_d;

// Integral over [s0, 1] (in cell units) of the cubic Hermite interpolant.
double hermite_int_tail(double p0, double m0, double p1, double m1, double h, double s0) {
    auto H00 = [](double s) { return s * s * s * s / 2 - s * s * s + s; };
    auto H10 = [](double s) { return s * s * s * s / 4 - 2 * s * s * s / 3 + s * s / 2; };
    auto H01 = [](double s) { return -s * s * s * s / 2 + s * s * s; };
    auto H11 = [](double s) { return s * s * s * s / 4 - s * s * s / 3; };
    return h * (p0 * (H00(1) - H00(s0)) + h * m0 * (H10(1) - H10(s0)) +
                p1 * (H01(1) - H01(s0)) + h * m1 * (H11(1) - H11(s0)));
}

HmPoint airy_point(double t) {
    if (t > specfun::kAiryMax) return {0.0, 0.0, 0.0};
    auto a = specfun::airy(t);
    return {a.ai, a.ai_prime, t * a.ai * a.ai - a.ai_prime * a.ai_prime};
}

}  // namespace

SeriesKind parse_series(const std::string& tag) {
    if (tag == "u") return SeriesKind::U;
    if (tag == "dlogu") return SeriesKind::DLogU;
    if (tag == "omega") return SeriesKind::Omega;
    if (tag == "q2") return SeriesKind::Q2;
    if (tag == "dlogf6") return SeriesKind::DLogF6;
    fail(Errc::UnknownSeries, "unknown series tag '" + tag + "'");
}

const char* series_name(SeriesKind k) {
    switch (k) {
        case SeriesKind::U: return "u";
        case SeriesKind::DLogU: return "dlogu";
        case SeriesKind::Omega: return "omega";
        case SeriesKind::Q2: return "q2";
        case SeriesKind::DLogF6: return "dlogf6";
    }
    return "?";
}

int series_max_order(SeriesKind k) { return (int)table(k).size() - 1; }

double series_term(SeriesKind kind, double t, int k) {
    const auto& tb = table(kind);
    if (k < 0 || k >= (int)tb.size())
        fail(Errc::OrderTooHigh, std::string("series '") + series_name(kind) + "' has no term " +
                                     std::to_string(k));
    if (t > -5.0) fail(Errc::Domain, "eval_series: t must be <= -5");
    return term_value(tb[k], t);
}

double eval_series(SeriesKind kind, double t, int order) {
    const auto& tb = table(kind);
    if (order < 0 || order >= (int)tb.size())
        fail(Errc::OrderTooHigh, std::string("series '") + series_name(kind) +
                                     "' is tabulated up to order " +
                                     std::to_string(tb.size() - 1));
    if (t > -5.0) fail(Errc::Domain, "eval_series: t must be <= -5");
    double s = 0.0;
    // smallest terms first
    for (int k = order; k >= 0; --k) s += term_value(tb[k], t);
    return s;
}

Painleve2Solution::Painleve2Solution(double t_min, double t_max, std::vector<double> u,
                                     std::vector<double> ut)
    : t_min_(t_min), t_max_(t_max), u_(std::move(u)), ut_(std::move(ut)) {
    const std::size_t n = u_.size();
    h_ = (t_max_ - t_min_) / (double)(n - 1);
    utt_.resize(n);
    uttt_.resize(n);
    om_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = node(i), v = u_[i];
        utt_[i] = t * v + 2 * v * v * v;
        uttt_[i] = v + (t + 6 * v * v) * ut_[i];
        om_[i] = v * v * v * v + t * v * v - ut_[i] * ut_[i];
    }
    // omega' = u^2, omega'' = 2 u u_t: cubic Hermite in (omega, u^2) per cell
    om_cum_.assign(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        double c = hermite_int_tail(om_[i], u_[i] * u_[i], om_[i + 1], u_[i + 1] * u_[i + 1], h_, 0.0);
        om_cum_[i] = om_cum_[i + 1] + c;
    }
    const double tm = t_max_;
    om_tail_ = specfun::integrate_to_infinity(
        [](double s) { return airy_point(s).omega; }, tm, 1.0);
}

std::size_t Painleve2Solution::cell(double t) const {
    double x = (t - t_min_) / h_;
    auto i = (std::size_t)std::max(0.0, std::floor(x));
    return std::min(i, u_.size() - 2);
}

HmPoint Painleve2Solution::eval(double t) const {
    if (!(t >= t_min_ && t <= t_max_))
        fail(Errc::OutOfRange, "hm eval: t outside solved interval");
    auto k = (std::size_t)std::lround((t - t_min_) / h_);
    if (k < u_.size() && node(k) == t) return {u_[k], ut_[k], om_[k]};
    std::size_t i = cell(t);
    double s = (t - node(i)) / h_;
    double u = quintic(u_[i], ut_[i], utt_[i], u_[i + 1], ut_[i + 1], utt_[i + 1], h_, s);
    double v = quintic(ut_[i], utt_[i], uttt_[i], ut_[i + 1], utt_[i + 1], uttt_[i + 1], h_, s);
    return {u, v, u * u * u * u + t * u * u - v * v};
}

double Painleve2Solution::utt(double t) const {
    if (!(t >= t_min_ && t <= t_max_))
        fail(Errc::OutOfRange, "hm utt: t outside solved interval");
    std::size_t i = cell(t);
    double s = (t - node(i)) / h_;
    return quintic_d(ut_[i], utt_[i], uttt_[i], ut_[i + 1], utt_[i + 1], uttt_[i + 1], h_, s);
}

HmPoint Painleve2Solution::eval_extended(double t) const {
    if (t >= t_min_ && t <= t_max_) return eval(t);
    if (t > t_max_) return airy_point(t);
    double u = eval_series(SeriesKind::U, t, series_max_order(SeriesKind::U));
    double l = eval_series(SeriesKind::DLogU, t, series_max_order(SeriesKind::DLogU));
    double ut = l * u;
    return {u, ut, u * u * u * u + t * u * u - ut * ut};
}

double Painleve2Solution::omega_tail_integral(double t) const {
    if (t > t_max_) {
        return specfun::integrate_to_infinity([](double s) { return airy_point(s).omega; }, t, 1.0);
    }
    if (t < t_min_) fail(Errc::OutOfRange, "omega integral: t below solved interval");
    std::size_t i = cell(t);
    double s = (t - node(i)) / h_;
    double part = hermite_int_tail(om_[i], u_[i] * u_[i], om_[i + 1], u_[i + 1] * u_[i + 1], h_, s);
    return part + om_cum_[i + 1] + om_tail_;
}

Painleve2Solution::Residuals Painleve2Solution::residuals() const {
    Residuals r{0.0, 0.0, 1e300};
    for (std::size_t i = 0; i + 1 < u_.size(); ++i) {
        double tm = node(i) + 0.5 * h_;
        double um = quintic(u_[i], ut_[i], utt_[i], u_[i + 1], ut_[i + 1], utt_[i + 1], h_, 0.5);
        double uttm = quintic_d(ut_[i], utt_[i], uttt_[i], ut_[i + 1], utt_[i + 1], uttt_[i + 1], h_, 0.5);
        r.ode_midpoint = std::max(r.ode_midpoint, std::fabs(uttm - tm * um - 2 * um * um * um));
        double mean = (u_[i] * u_[i] + 4 * um * um + u_[i + 1] * u_[i + 1]) / 6.0;
        r.omega_slope = std::max(r.omega_slope, std::fabs((om_[i + 1] - om_[i]) / h_ - mean));
    }
    for (double v : u_) r.min_u = std::min(r.min_u, v);
    return r;
}

std::string Painleve2Solution::to_csv() const {
    std::string out = "t,u,ut,omega\n";
    for (std::size_t i = 0; i < u_.size(); ++i)
        out += util::csv_row({node(i), u_[i], ut_[i], om_[i]});
    return out;
}

Painleve2Solution solve_hastings_mcleod(double t_min, double t_max, int n, double tol,
                                        const SolveOptions& opt) {
    if (!(t_min <= -10.0) || !(t_max >= 6.0) || n < 2000 || !(tol > 0))
        fail(Errc::BadInterval, "solve_hastings_mcleod: need t_min <= -10, t_max >= 6, n >= 2000, tol > 0");
    if (t_min < -60.0 || t_max > specfun::kAiryMax)
        fail(Errc::BadInterval, "solve_hastings_mcleod: interval outside supported range [-60, 30]");
    const double h = (t_max - t_min) / (double)(n - 1);
    const double h2 = h * h / 12.0;
    std::vector<double> t(n), u(n);
    for (int i = 0; i < n; ++i) {
        t[i] = t_min + h * i;
        u[i] = initial_guess(t[i]);
    }
    u[0] = eval_series(SeriesKind::U, t_min, series_max_order(SeriesKind::U));
    u[n - 1] = specfun::airy(t_max).ai;

    auto f = [&](int i, double v) { return t[i] * v + 2 * v * v * v; };
    auto residual = [&](const std::vector<double>& w, std::vector<double>& r) {
        double mx = 0.0;
        for (int i = 1; i < n - 1; ++i) {
            r[i] = w[i + 1] - 2 * w[i] + w[i - 1] -
                   h2 * (f(i + 1, w[i + 1]) + 10 * f(i, w[i]) + f(i - 1, w[i - 1]));
            mx = std::max(mx, std::fabs(r[i]));
        }
        return mx;
    };

    std::vector<double> r(n, 0.0), a(n), b(n), c(n), d(n), trial(n);
    double rn = residual(u, r);
    int it = 0;
    double upd = 1e300;
    for (; it < opt.max_iterations; ++it) {
        // Jacobian: tridiagonal in the interior unknowns 1..n-2
        for (int i = 1; i < n - 1; ++i) {
            auto fp = [&](int j) { return t[j] + 6 * u[j] * u[j]; };
            a[i] = 1 - h2 * fp(i - 1);
            b[i] = -2 - 10 * h2 * fp(i);
            c[i] = 1 - h2 * fp(i + 1);
            d[i] = -r[i];
        }
        // Thomas sweep
        for (int i = 2; i < n - 1; ++i) {
            double m = a[i] / b[i - 1];
            b[i] -= m * c[i - 1];
            d[i] -= m * d[i - 1];
        }
        std::vector<double> du(n, 0.0);
        du[n - 2] = d[n - 2] / b[n - 2];
        for (int i = n - 3; i >= 1; --i) du[i] = (d[i] - c[i] * du[i + 1]) / b[i];

        double lam = 1.0, rt = 0.0;
        for (int k = 0; k < 30; ++k) {
            for (int i = 0; i < n; ++i) trial[i] = u[i] + lam * du[i];
            std::vector<double> rr(n, 0.0);
            rt = residual(trial, rr);
            if (rt < rn || rt < 1e-13) {
                r.swap(rr);
                break;
            }
            lam *= 0.5;
        }
        if (!(rt < rn) && !(rt < 1e-13))
            fail(Errc::NewtonDivergence, "hm newton: residual failed to contract");
        upd = 0.0;
        for (int i = 0; i < n; ++i) upd = std::max(upd, std::fabs(lam * du[i]));
        u.swap(trial);
        rn = rt;
        if (upd < tol && lam == 1.0) {
            ++it;
            break;
        }
    }
    if (!(upd < tol)) fail(Errc::NewtonDivergence, "hm newton: no convergence in iteration budget");

    // fourth-order nodal derivatives from the Numerov data
    std::vector<double> ut(n), fv(n);
    for (int i = 0; i < n; ++i) fv[i] = f(i, u[i]);
    for (int i = 1; i < n - 1; ++i)
        ut[i] = (u[i + 1] - u[i - 1]) / (2 * h) - h / 12.0 * (fv[i + 1] - fv[i - 1]);
    ut[0] = ut[1] - h * (5 * fv[0] + 8 * fv[1] - fv[2]) / 12.0;
    ut[n - 1] = ut[n - 2] + h * (5 * fv[n - 1] + 8 * fv[n - 2] - fv[n - 3]) / 12.0;

    Painleve2Solution sol(t_min, t_max, std::move(u), std::move(ut));
    sol.newton_iterations = it;
    sol.final_update = upd;
    return sol;
}

}  // namespace twlab::p2
