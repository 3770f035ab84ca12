#include "twlab/auxsys.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <cmath>
#include <random>

#include "interp.hpp"
#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"
#include "twlab/util.hpp"

namespace twlab::aux {

namespace odeint = boost::numeric::odeint;
using detail::hermite;
using detail::hermite_d;

namespace {

// absolute tolerance relative to tol; lets components that start at exactly 0 move
constexpr double kAbsFloor = 1e-30;

struct Hm {
    double u, ut, om, L, Lt;
};

Hm hm_at(const p2::Painleve2Solution& hm, double t) {
    auto p = hm.eval_extended(t);
    if (!(p.u > 0.0)) fail(Errc::Domain, fmt::format("u({}) is not positive", t));
    double L = p.ut / p.u;
    return {p.u, p.ut, p.omega, L, t + 2.0 * p.u * p.u - L * L};
}

std::vector<double> node_grid(double t_start, double t_end, double step) {
    std::vector<double> out;
    for (long k = 0;; ++k) {
        double t = t_start - step * (double)k;
        if (t < t_end + 1e-9 * step) break;
        out.push_back(t);
    }
    if (out.back() > t_end) out.push_back(t_end);
    return out;
}

void check_args(const p2::Painleve2Solution& hm, double t_start, double t_end, double tol) {
    if (!(t_end < t_start)) fail(Errc::BadInterval, "aux: need t_end < t_start");
    if (t_start > specfun::kAiryMax - 5.0)
        fail(Errc::BadInterval, "aux: t_start beyond the range where u is representable");
    if (t_end < hm.t_min() - 1e-12) fail(Errc::BadInterval, "aux: t_end below the HM grid");
    if (!(tol > 0.0) || tol > 1e-4) fail(Errc::Domain, "aux: tol must lie in (0, 1e-4]");
}

// Steps x from t to t_target with the controlled stepper; calls on_step after
// every accepted step.
template <class Ctrl, class Sys, class State, class OnStep>
void advance(Ctrl& ctrl, Sys& sys, State& x, double& t, double t_target, double& dt,
             OnStep&& on_step) {
    int fails = 0;
    while (t > t_target) {
        bool last = false;
        if (t + dt <= t_target) {
            dt = t_target - t;
            last = true;
        }
        double t_old = t;
        auto r = ctrl.try_step(sys, x, t, dt);
        if (r == odeint::success) {
            fails = 0;
            if (last) t = t_target;
            on_step(t_old, t);
        } else {
            if (std::fabs(dt) < 1e-14 * std::max(1.0, std::fabs(t)) || ++fails > 500)
                fail(Errc::StepFailure, fmt::format("aux: step size underflow at t = {}", t));
        }
        if (dt > -1e-15) dt = -1e-15;
    }
}

void finish_scaled(AuxSolution& s, const p2::Painleve2Solution& hm, const std::vector<double>& deps,
                   const std::vector<double>& dalpha) {
    std::size_t n = s.t.size();
    s.eps_s.resize(n);
    s.deps_s.resize(n);
    s.alpha_s.resize(n);
    s.dalpha_s.resize(n);
    s.u2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Hm h = hm_at(hm, s.t[i]);
        double u2 = h.u * h.u;
        s.u2[i] = u2;
        s.eps_s[i] = s.eps[i] / u2;
        s.alpha_s[i] = s.alpha[i] / u2;
        s.deps_s[i] = deps[i] / u2 - 2.0 * h.L * s.eps_s[i];
        s.dalpha_s[i] = dalpha[i] / u2 - 2.0 * h.L * s.alpha_s[i];
    }
    s.hm = std::make_shared<const p2::Painleve2Solution>(hm);
}

template <class V>
void reverse_all(V& v) {
    std::reverse(v.begin(), v.end());
}

}  // namespace

std::pair<double, double> slaved_coefficients(double t, double L) {
    double A = -(2.0 / 3.0) / (L - t / (9.0 * L));
    double E = -2.0 * A / (3.0 * L);
    return {A, E};
}

AuxSolution integrate_linear(const p2::Painleve2Solution& hm, double t_start, double t_end,
                             double tol, const AuxOptions& opt) {
    check_args(hm, t_start, t_end, tol);
    if (opt.control_b_equals_e1) fail(Errc::Domain, "the b = e1 control is only available on the nonlinear route");
    using State = std::array<double, 3>;
    AuxSolution s;
    s.route = Route::Linear;
    s.init = opt.init;
    s.t_start = t_start;
    s.t_end = t_end;
    s.tol = tol;

    auto rhs = [&](const State& y, State& dy, double t) {
        Hm h = hm_at(hm, t);
        dy[0] = (2.0 / 3.0) * h.L * y[0] - y[2] / 3.0;
        dy[1] = -(2.0 / 3.0) * h.L * y[1] + y[2] / 3.0;
        dy[2] = (2.0 / 3.0) * h.u * h.u * y[1] + (2.0 / 3.0) * (h.om / (h.u * h.u)) * y[0];
    };

    State y{0.0, 1.0, 0.0};
    if (opt.init == InitialData::Slaved) {
        Hm h = hm_at(hm, t_start);
        auto [A, E] = slaved_coefficients(t_start, h.L);
        double eps = E * h.u * h.u, alpha = A * h.u * h.u;
        y = {-eps / 2.0, 1.0, -(2.0 * alpha + h.L * eps) / 2.0};
    }
    for (double& v : y) v *= opt.initial_scale;

    auto nodes = node_grid(t_start, t_end, opt.node_step);
    std::vector<double> deps, dalpha;
    double log_scale = 0.0;

    auto record = [&](double t) {
        State dy;
        rhs(y, dy, t);
        Hm h = hm_at(hm, t);
        double D = y[0] - y[1], Dt = dy[0] - dy[1];
        double eps = 2.0 * y[0] / D;
        double alpha = (y[2] - h.L * y[0]) / D;
        s.t.push_back(t);
        s.mu_plus.push_back(y[0]);
        s.mu_minus.push_back(y[1]);
        s.nu.push_back(y[2]);
        s.log_scale.push_back(log_scale);
        s.eps.push_back(eps);
        s.alpha.push_back(alpha);
        s.q1.push_back(2.0 * y[2] / D);
        deps.push_back((2.0 * dy[0] - eps * Dt) / D);
        dalpha.push_back((dy[2] - h.Lt * y[0] - h.L * dy[0] - alpha * Dt) / D);
    };

    auto ctrl = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(kAbsFloor * tol, tol);
    double t = t_start, dt = -1e-3;
    double D_prev = y[0] - y[1], S_prev = y[0] + y[1];
    auto on_step = [&](double t_old, double t_new) {
        double D = y[0] - y[1], S = y[0] + y[1];
        if (D == 0.0 || (D > 0) != (D_prev > 0)) {
            s.events.push_back({t_new, "mu_plus - mu_minus sign change"});
            fail(Errc::PoleEncountered,
                 fmt::format("q2 pole: mu_plus - mu_minus changes sign in [{}, {}]", t_new, t_old));
        }
        if ((S > 0) != (S_prev > 0) && S_prev != 0.0) {
            double te = t_old + (t_new - t_old) * S_prev / (S_prev - S);
            s.events.push_back({te, "q2 sign change"});
        }
        D_prev = D;
        S_prev = S;
        double m = std::max({std::fabs(y[0]), std::fabs(y[1]), std::fabs(y[2])});
        if (m > opt.rescale_threshold || m < 1.0 / opt.rescale_threshold) {
            for (double& v : y) v /= m;
            log_scale += std::log(m);
            D_prev /= m;
            S_prev /= m;
        }
    };

    record(t);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        advance(ctrl, rhs, y, t, nodes[k], dt, on_step);
        t = nodes[k];
        record(t);
    }

    for (auto* v : {&s.t, &s.mu_plus, &s.mu_minus, &s.nu, &s.log_scale, &s.eps, &s.alpha, &s.q1,
                    &deps, &dalpha})
        reverse_all(*v);
    finish_scaled(s, hm, deps, dalpha);
    return s;
}

AuxSolution integrate_nonlinear(const p2::Painleve2Solution& hm, double t_start, double t_end,
                                double tol, const AuxOptions& opt) {
    check_args(hm, t_start, t_end, tol);
    using State = std::array<double, 2>;  // (1 + q2, alpha)
    AuxSolution s;
    s.route = Route::Nonlinear;
    s.init = opt.init;
    s.t_start = t_start;
    s.t_end = t_end;
    s.tol = tol;

    auto rhs = [&](const State& y, State& dy, double t) {
        Hm h = hm_at(hm, t);
        double p = y[0], a = y[1];
        dy[0] = opt.control_b_equals_e1 ? h.L * p * (2.0 - p) / 2.0
                                        : (2.0 / 3.0) * a * (p - 1.0) + h.L * p * (3.0 - p) / 3.0;
        dy[1] = a * ((2.0 / 3.0) * a + h.L * (3.0 - p) / 3.0) - (t / 6.0) * p -
                (h.u * h.u / 3.0) * (2.0 + p);
    };

    State y{0.0, 0.0};
    if (opt.init == InitialData::Slaved) {
        Hm h = hm_at(hm, t_start);
        auto [A, E] = slaved_coefficients(t_start, h.L);
        y = {E * h.u * h.u, A * h.u * h.u};
    }

    auto nodes = node_grid(t_start, t_end, opt.node_step);
    std::vector<double> deps, dalpha;
    auto record = [&](double t) {
        State dy;
        rhs(y, dy, t);
        Hm h = hm_at(hm, t);
        s.t.push_back(t);
        s.eps.push_back(y[0]);
        s.alpha.push_back(y[1]);
        s.q1.push_back(2.0 * y[1] + h.L * y[0]);
        deps.push_back(dy[0]);
        dalpha.push_back(dy[1]);
    };

    auto ctrl = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(kAbsFloor * tol, tol);
    double t = t_start, dt = -1e-3;
    double q2_prev = y[0] - 1.0;
    auto on_step = [&](double t_old, double t_new) {
        double q2 = y[0] - 1.0;
        if (!std::isfinite(q2) || !std::isfinite(y[1]) || std::fabs(q2) > opt.blowup ||
            std::fabs(y[1]) > opt.blowup) {
            s.events.push_back({t_new, "blow-up"});
            fail(Errc::BlowUp, fmt::format("nonlinear route blows up near t = {}", t_new));
        }
        if ((q2 > 0) != (q2_prev > 0) && q2_prev != 0.0) {
            double te = t_old + (t_new - t_old) * q2_prev / (q2_prev - q2);
            s.events.push_back({te, "q2 sign change"});
        }
        q2_prev = q2;
    };

    record(t);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        advance(ctrl, rhs, y, t, nodes[k], dt, on_step);
        t = nodes[k];
        record(t);
    }
    for (auto* v : {&s.t, &s.eps, &s.alpha, &s.q1, &deps, &dalpha}) reverse_all(*v);
    finish_scaled(s, hm, deps, dalpha);
    return s;
}

AuxSolution compute_log_kappa(AuxSolution aux, const p2::Painleve2Solution& hm) {
    std::size_t n = aux.t.size();
    if (n < 2) fail(Errc::BadInterval, "compute_log_kappa: empty solution");
    // G = log(kappa u^(1/2)), G' = -omega/3 - 2 alpha/3 + (u_t/u)(1 + q2)/3, G(t_start) = 0
    auto g = [&](double t) {
        Hm h = hm_at(hm, t);
        auto st = aux.eval(t);
        return -h.om / 3.0 - 2.0 * st.alpha / 3.0 + h.L * st.eps / 3.0;
    };
    aux.log_kappa_sqrt_u.assign(n, 0.0);
    aux.log_kappa.assign(n, 0.0);
    aux.dg.assign(n, 0.0);
    aux.dlogk.assign(n, 0.0);
    const auto& rule = specfun::gauss_legendre(8, 0.0, 1.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        double a = aux.t[i], b = aux.t[i + 1], acc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * g(a + (b - a) * rule.nodes[j]);
        aux.log_kappa_sqrt_u[i] = aux.log_kappa_sqrt_u[i + 1] - (b - a) * acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Hm h = hm_at(hm, aux.t[i]);
        aux.dg[i] = -h.om / 3.0 - 2.0 * aux.alpha[i] / 3.0 + h.L * aux.eps[i] / 3.0;
        aux.dlogk[i] = aux.dg[i] - h.L / 2.0;
        aux.log_kappa[i] = aux.log_kappa_sqrt_u[i] - 0.5 * std::log(h.u);
    }
    aux.has_kappa = true;
    return aux;
}

AuxSolution solve(const p2::Painleve2Solution& hm, double t_start, double t_end, double tol,
                  const AuxOptions& opt) {
    auto s = opt.route == Route::Linear ? integrate_linear(hm, t_start, t_end, tol, opt)
                                        : integrate_nonlinear(hm, t_start, t_end, tol, opt);
    return compute_log_kappa(std::move(s), hm);
}

std::size_t AuxSolution::cell(double tt) const {
    if (t.size() < 2 || tt < t.front() - 1e-12 || tt > t.back() + 1e-12)
        fail(Errc::OutOfRange, fmt::format("aux: t = {} outside [{}, {}]", tt, t_end, t_start));
    auto it = std::upper_bound(t.begin(), t.end(), tt);
    std::size_t i = (std::size_t)std::max<std::ptrdiff_t>(0, (it - t.begin()) - 1);
    return std::min(i, t.size() - 2);
}

AuxState AuxSolution::eval(double tt) const {
    std::size_t i = cell(tt);
    double h = t[i + 1] - t[i], s = (tt - t[i]) / h;
    auto p = hm->eval_extended(tt);
    double u2 = p.u * p.u;
    AuxState st{};
    st.eps = u2 * hermite(eps_s[i], deps_s[i], eps_s[i + 1], deps_s[i + 1], h, s);
    st.alpha = u2 * hermite(alpha_s[i], dalpha_s[i], alpha_s[i + 1], dalpha_s[i + 1], h, s);
    st.q2 = st.eps - 1.0;
    st.q1 = 2.0 * st.alpha + (p.ut / p.u) * st.eps;
    if (has_kappa) {
        st.log_kappa_sqrt_u =
            hermite(log_kappa_sqrt_u[i], dg[i], log_kappa_sqrt_u[i + 1], dg[i + 1], h, s);
        st.log_kappa = st.log_kappa_sqrt_u - 0.5 * std::log(p.u);
    } else {
        st.log_kappa = st.log_kappa_sqrt_u = std::nan("");
    }
    return st;
}

double AuxSolution::eps_t(double tt) const {
    std::size_t i = cell(tt);
    double h = t[i + 1] - t[i], s = (tt - t[i]) / h;
    auto p = hm->eval_extended(tt);
    double u2 = p.u * p.u, L = p.ut / p.u;
    double v = hermite(eps_s[i], deps_s[i], eps_s[i + 1], deps_s[i + 1], h, s);
    double dv = hermite_d(eps_s[i], deps_s[i], eps_s[i + 1], deps_s[i + 1], h, s);
    return u2 * (dv + 2.0 * L * v);
}

double AuxSolution::alpha_t(double tt) const {
    std::size_t i = cell(tt);
    double h = t[i + 1] - t[i], s = (tt - t[i]) / h;
    auto p = hm->eval_extended(tt);
    double u2 = p.u * p.u, L = p.ut / p.u;
    double v = hermite(alpha_s[i], dalpha_s[i], alpha_s[i + 1], dalpha_s[i + 1], h, s);
    double dv = hermite_d(alpha_s[i], dalpha_s[i], alpha_s[i + 1], dalpha_s[i + 1], h, s);
    return u2 * (dv + 2.0 * L * v);
}

std::string AuxSolution::to_csv() const {
    std::string out = "t,mu_plus,mu_minus,nu,log_scale,q2,alpha,log_kappa\n";
    double nan = std::nan("");
    bool lin = !mu_plus.empty();
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += util::csv_row({t[i], lin ? mu_plus[i] : nan, lin ? mu_minus[i] : nan,
                              lin ? nu[i] : nan, lin ? log_scale[i] : nan, eps[i] - 1.0, alpha[i],
                              has_kappa ? log_kappa[i] : nan});
    }
    return out;
}

// ---------------------------------------------------------------------------

LaxParams algebraic_params(double t, double u, double ut, double eps, double alpha) {
    LaxParams p{};
    double L = ut / u, q2 = eps - 1.0, m = 2.0 - eps, D = eps * m, u2 = u * u;
    // eps is carried exactly, so only q2 = 1 or an exact eps = 0 is degenerate
    if (eps == 0.0 || std::fabs(m) < 1e-12)
        fail(Errc::DegenerateQ2, fmt::format("1 - q2^2 vanishes (q2 = {})", q2));
    double delta = -t / 2.0 - u2;
    p.t = t;
    p.u = u;
    p.ut = ut;
    p.q2 = q2;
    p.eps = eps;
    p.alpha = alpha;
    p.delta = delta;
    p.w = -ut;
    p.q1 = 2.0 * alpha + L * eps;
    p.q0 = 2.0 * alpha * L - 2.0 * delta;
    p.e1 = -4.0 * alpha * q2 / D - L * eps / m;
    p.e2 = 4.0 / D * (-alpha * alpha + u2 + eps * delta - eps * alpha * L);
    p.e3 = -4.0 / D * (-2.0 * alpha * delta + alpha * alpha * L + ut * u + eps / 2.0);
    p.a = p.d = p.b = p.c = p.U = p.U_def = std::nan("");
    return p;
}

namespace {

// Five-point first derivative; one-sided near the ends of [lo, hi].
template <class F>
double fd5(F&& f, double t, double h, double lo, double hi) {
    if (t - 2 * h >= lo && t + 2 * h <= hi)
        return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
    if (t + 4 * h <= hi)
        return (-25 * f(t) + 48 * f(t + h) - 36 * f(t + 2 * h) + 16 * f(t + 3 * h) -
                3 * f(t + 4 * h)) /
               (12 * h);
    if (t - 4 * h >= lo)
        return (25 * f(t) - 48 * f(t - h) + 36 * f(t - 2 * h) - 16 * f(t - 3 * h) +
                3 * f(t - 4 * h)) /
               (12 * h);
    fail(Errc::BadInterval, "finite difference stencil does not fit the solved interval");
}

void check_q2(double eps) {
    if (eps == 0.0 || std::fabs(2.0 - eps) < 1e-12)
        fail(Errc::DegenerateQ2, fmt::format("1 - q2^2 vanishes (q2 = {})", eps - 1.0));
}

}  // namespace

LaxParams reconstruct_params(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t,
                             double h) {
    auto st = aux.eval(t);
    check_q2(st.eps);
    auto pt = hm.eval_extended(t);
    LaxParams p = algebraic_params(t, pt.u, pt.ut, st.eps, st.alpha);
    p.omega = pt.omega;
    p.kappa_log = st.log_kappa;
    double lo = aux.t.front(), hi = aux.t.back();
    p.q2t = fd5([&](double s) { return aux.eval(s).eps; }, t, h, lo, hi);
    p.alpha_t = fd5([&](double s) { return aux.eval(s).alpha; }, t, h, lo, hi);
    p.kt = aux.has_kappa ? fd5([&](double s) { return aux.eval(s).log_kappa; }, t, h, lo, hi)
                         : std::nan("");

    double L = pt.ut / pt.u, q2 = st.q2, eps = st.eps, m = 2.0 - eps, D = eps * m;
    double u2 = pt.u * pt.u, al = st.alpha;
    p.a = p.kt + L / 2.0 + al;
    p.d = p.kt - L / 2.0 - al - 2.0 * q2 * p.q2t / D;
    p.b = 4.0 / D * (-al * q2 + p.q2t / 2.0 - L * eps / 2.0);
    p.c = 4.0 / D * (al * al - u2 - p.alpha_t + al * L);
    p.U = -2.0 * pt.omega - 4.0 * al / D - L * eps / m - t * t / 2.0;
    p.U_def = 3.0 * (p.a + p.d) - t * t / 2.0;
    return p;
}

RIntegrals eval_r_and_integrals(const LaxParams& p) {
    RIntegrals r{};
    double s = (p.q2 * p.q2 - 1.0) / 4.0;
    r.r2 = s * (p.e1 * p.e1 - p.e2) - 0.5 * p.e1 * p.q1 * p.q2 + 0.5 * p.q2 * p.q0 +
           0.25 * p.q1 * p.q1;
    r.r1 = s * (p.e3 - p.e2 * p.e1) + 0.5 * p.e2 * p.q1 * p.q2 - 0.5 * p.q1 * p.q0;
    r.r0 = p.q0 * p.q0 / 4.0 + p.e1 * p.e3 * s - 0.5 * p.e3 * p.q1 * p.q2;
    r.I0 = 2.0 * r.r0 + p.U - p.e1 * p.q2 + 2.0 * p.q1;
    r.I0_def = 2.0 * r.r0 + p.U_def - p.e1 * p.q2 + 2.0 * p.q1;
    r.I1 = 2.0 * r.r1 - 1.0 - p.q2;
    r.I2 = 2.0 * r.r2 + p.t;
    r.r0_closed = p.omega + p.t * p.t / 4.0 - (p.ut / p.u) * (1.0 + p.q2) / 2.0;
    return r;
}

IdentityCheck random_identity_check(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uq(-0.95, 0.95), ua(-2.5, 2.5), uu(0.05, 2.5), ul(-3, 3),
        ut(-10, 8);
    IdentityCheck c;
    c.count = count;
    for (int i = 0; i < count; ++i) {
        double q2 = uq(rng), al = ua(rng), u = uu(rng), L = ul(rng), t = ut(rng);
        auto r = eval_r_and_integrals(algebraic_params(t, u, L * u, 1.0 + q2, al));
        c.r2 = std::max(c.r2, std::fabs(r.r2 + t / 2.0));
        c.r1 = std::max(c.r1, std::fabs(r.r1 - (1.0 + q2) / 2.0));
    }
    return c;
}

std::array<double, 6> rumsys_residuals(const AuxSolution& aux, const p2::Painleve2Solution& hm,
                                       double t, double h) {
    auto P = reconstruct_params(aux, hm, t, h);
    auto alg = [&](double s) {
        auto st = aux.eval(s);
        check_q2(st.eps);
        auto pt = hm.eval_extended(s);
        return algebraic_params(s, pt.u, pt.ut, st.eps, st.alpha);
    };
    double lo = aux.t.front(), hi = aux.t.back();
    auto d = [&](double LaxParams::*f) {
        return fd5([&](double s) { return alg(s).*f; }, t, h, lo, hi);
    };
    double e1 = P.e1, e2 = P.e2, e3 = P.e3, q0 = P.q0, q1 = P.q1, q2 = P.q2, b = P.b, c = P.c;
    std::array<double, 6> r{};
    r[0] = d(&LaxParams::e1) - ((b - e1) * (q2 * e1 - q1) + q2 * (c + e2) - q0);
    r[1] = d(&LaxParams::e2) - (-2.0 + q2 * (b * e2 + e3 - e1 * e2) + q1 * e2 + q1 * c - q0 * b);
    r[2] = d(&LaxParams::e3) - (e3 * (q1 - q2 * e1 + q2 * b) + q0 * c - b);
    r[3] = d(&LaxParams::q0) -
           (-q2 + 0.5 * e3 * (q2 * q2 - 1.0) + c * (q1 * q2 + 0.5 * e1 * (1.0 - q2 * q2)));
    r[4] = d(&LaxParams::q1) - (-q1 * q2 * b + 0.5 * (q2 * q2 - 1.0) * (e2 + b * e1 + c));
    r[5] = d(&LaxParams::q2) - ((q2 * q2 - 1.0) * (e1 - b / 2.0) - q1 * q2);
    return r;
}

EtaReport eta_residual(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t,
                       double h) {
    if (t - 3 * h < aux.t.front() || t + 3 * h > aux.t.back())
        fail(Errc::BadInterval, "eta_residual: t must be 3h inside the solved interval");
    auto eta = [&](double s) {
        auto st = aux.eval(s);
        auto pt = hm.eval_extended(s);
        if (st.eps == 2.0 || pt.omega == 0.0)
            fail(Errc::DegenerateDenominator, fmt::format("eta undefined at t = {}", s));
        double L = pt.ut / pt.u, m = 2.0 - st.eps;
        return 2.0 * st.alpha / (st.q2 - 1.0) - pt.u * pt.u / pt.omega - L * st.eps / m;
    };
    auto g = [&](double s) {
        auto pt = hm.eval_extended(s);
        if (pt.omega == 0.0) fail(Errc::DegenerateDenominator, "omega vanishes");
        return pt.u * pt.u / pt.omega - pt.omega;
    };
    auto Pf = [&](double s) { return 12.0 * (g(s + h) - g(s - h)) / (2 * h) - 4.0 * s; };
    double P = Pf(t);
    double Pt = 12.0 * (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h) - 4.0;
    double Q = (2.0 / 3.0) * Pt + 2.0 / 3.0;

    double e0 = eta(t), ep = eta(t + h), em = eta(t - h);
    double et = (ep - em) / (2 * h), ett = (ep - 2 * e0 + em) / (h * h);
    EtaReport rep{};
    rep.eta = e0;
    rep.eta_residual = std::fabs(9 * ett + 9 * e0 * et + e0 * e0 * e0 + P * e0 + Q);

    // f(t + k h) / f(t) = exp((1/3) int_t^{t+kh} eta)
    const auto& rule = specfun::gauss_legendre(10, 0.0, 1.0);
    auto logf = [&](double s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * eta(t + (s - t) * rule.nodes[j]);
        return (s - t) * acc / 3.0;
    };
    double f1 = std::exp(logf(t + h)), fm1 = std::exp(logf(t - h));
    double f2 = std::exp(logf(t + 2 * h)), fm2 = std::exp(logf(t - 2 * h));
    double ft = (f1 - fm1) / (2 * h);
    double fttt = (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h);
    rep.f_residual = std::fabs(27 * fttt + 3 * P * ft + Q);

    auto q2 = [&](double s) { return aux.eval(s).q2; };
    double q0 = q2(t), qp = q2(t + h), qm = q2(t - h);
    if (q0 == 0.0) fail(Errc::DegenerateDenominator, "q2 vanishes at the evaluation point");
    double qt = (qp - qm) / (2 * h), qtt = (qp - 2 * q0 + qm) / (h * h);
    auto pt = hm.eval_extended(t);
    double L = pt.ut / pt.u, u2 = pt.u * pt.u;
    double rhs = (2 * qt / q0) * (qt - L) + (4.0 / 9.0) * (q0 * q0 - 1.5) * (L * L - t - 2 * u2) -
                 (2.0 / 9.0) * q0 * (3 * L * L - t) + 4 * L * L / (9 * q0);
    rep.q2eq3_residual = std::fabs(qtt - rhs);
    return rep;
}

double alpha_from_q2(const AuxSolution& aux, const p2::Painleve2Solution& hm, double t, double h) {
    auto st = aux.eval(t);
    if (std::fabs(st.q2) < 1e-8)
        fail(Errc::DegenerateDenominator, fmt::format("q2 vanishes near t = {}", t));
    double qt = fd5([&](double s) { return aux.eval(s).eps; }, t, h, aux.t.front(), aux.t.back());
    auto pt = hm.eval_extended(t);
    double L = pt.ut / pt.u;
    return 1.5 * qt / st.q2 - L * st.eps * (2.0 - st.q2) / (2.0 * st.q2);
}

}  // namespace twlab::aux
