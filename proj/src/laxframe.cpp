#include "twlab/laxframe.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <cmath>
#include <thread>

#include "twlab/errors.hpp"
#include "twlab/util.hpp"

namespace twlab::lax {

namespace odeint = boost::numeric::odeint;

namespace {

const cplx I1{0.0, 1.0};

Matrix2 mat(cplx a, cplx b, cplx c, cplx d) {
    Matrix2 m;
    m << a, b, c, d;
    return m;
}

Matrix2 sigma3() { return mat(1.0, 0.0, 0.0, -1.0); }

double theta_of(double x, double t) { return x * x * x / 6.0 - x * t / 2.0; }

using Vec2 = std::array<cplx, 2>;

// Coefficients of the x-equation in the variables Y = Psi e^{-/+ theta}.
struct RowCoeffs {
    double u, ut, t;
    // type 0: column ~ e^{theta}; type 1: column ~ e^{-theta}
    void apply(int type, cplx z, const Vec2& y, Vec2& dy) const {
        cplx th2 = z * z - t;  // 2 theta'
        cplx off12 = z * u - ut, off21 = z * u + ut;
        double u2 = u * u;
        if (type == 0) {
            dy[0] = -u2 * y[0] + off12 * y[1];
            dy[1] = off21 * y[0] + (u2 - th2) * y[1];
        } else {
            dy[0] = (th2 - u2) * y[0] + off12 * y[1];
            dy[1] = off21 * y[0] + u2 * y[1];
        }
    }
};

// Fixed-step RK7(8) along the straight segment z0 -> z1.
Vec2 propagate(const RowCoeffs& c, int type, Vec2 y, cplx z0, cplx z1, double max_step) {
    double len = std::abs(z1 - z0);
    if (len == 0.0) return y;
    cplx dir = (z1 - z0) / len;
    double zmax = std::max(std::abs(z0), std::abs(z1));
    double h = std::min(max_step, 0.5 / std::max(1.0, zmax * zmax + std::fabs(c.t)));
    int n = std::max(1, (int)std::ceil(len / h - 1e-9));
    h = len / n;
    odeint::runge_kutta_fehlberg78<Vec2> stepper;
    auto sys = [&](const Vec2& s, Vec2& ds, double par) {
        c.apply(type, z0 + dir * par, s, ds);
        ds[0] *= dir;
        ds[1] *= dir;
    };
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        stepper.do_step(sys, y, s, h);
        s = h * (k + 1);
    }
    return y;
}

void set_col(Matrix2& m, int j, const Vec2& v) {
    m(0, j) = v[0];
    m(1, j) = v[1];
}

double vnorm(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

StokesData StokesData::ablowitz_segur(double a) {
    StokesData s;
    s.s1 = cplx(0.0, -a);
    s.s2 = 0.0;
    s.s3 = cplx(0.0, a);
    return s;
}

bool StokesData::is_real_class(double tol) const {
    return std::abs(s1 - std::conj(s3)) <= tol && std::fabs(s2.imag()) <= tol;
}

Matrix2 StokesData::matrix(int k) const {
    switch (k) {
        case 1: return mat(1.0, 0.0, -I1 * s1, 1.0);
        case 2: return mat(1.0, I1 * s2, 0.0, 1.0);
        case 3: return mat(1.0, 0.0, -I1 * s3, 1.0);
        case 4: return mat(1.0, -I1 * s1, 0.0, 1.0);
        case 5: return mat(1.0, 0.0, I1 * s2, 1.0);
        case 6: return mat(1.0, -I1 * s3, 0.0, 1.0);
        default: fail(Errc::Domain, fmt::format("Stokes matrix index {} not in 1..6", k));
    }
}

std::pair<Matrix2, Matrix2> build_L0_B0(const p2::HmPoint& p, double x, double t) {
    double delta = -t / 2.0 - p.u * p.u, w = -p.ut;
    Matrix2 L = (x * x / 2.0) * sigma3() + x * mat(0.0, p.u, p.u, 0.0) + mat(delta, w, -w, -delta);
    Matrix2 B = -(x / 2.0) * sigma3() - mat(0.0, p.u, p.u, 0.0);
    return {L, B};
}

std::pair<Matrix2, Matrix2> build_L0_B0(const p2::Painleve2Solution& hm, double x, double t) {
    return build_L0_B0(hm.eval(t), x, t);
}

std::pair<Matrix2, Matrix2> build_rumanov_L_B(const aux::LaxParams& p, double x) {
    double t = p.t, q2 = p.q2, q1 = p.q1, q0 = p.q0, e1 = p.e1, e2 = p.e2, e3 = p.e3;
    double x2 = x * x;
    Matrix2 L = 0.5 * mat(x2 - t + x2 * q2 - x * q1 + q0, 2.0 * (x2 * x - x2 * e1 + x * e2 - e3),
                          (x + e1) * (1.0 - q2 * q2) / 2.0 + q1 * q2,
                          x2 - t - x2 * q2 + x * q1 - q0);
    Matrix2 B = mat(-(x / 2.0) * (1.0 + q2) + p.a, -x2 + x * p.b + p.c, (q2 * q2 - 1.0) / 4.0,
                    -(x / 2.0) * (1.0 - q2) + p.d);
    return {L, B};
}

namespace {

template <class F>
Matrix2 fd5m(F&& f, double t, double h) {
    return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h);
}

}  // namespace

Matrix2 zero_curvature_fn(const p2::Painleve2Solution& hm, double x, double t, double h) {
    auto [L, B] = build_L0_B0(hm, x, t);
    Matrix2 Bx = -0.5 * sigma3();
    Matrix2 Lt = fd5m([&](double s) { return build_L0_B0(hm, x, s).first; }, t, h);
    return Bx - Lt - (L * B - B * L);
}

Matrix2 zero_curvature_rumanov(const aux::AuxSolution& aux, const p2::Painleve2Solution& hm,
                               double x, double t, double h) {
    auto P = aux::reconstruct_params(aux, hm, t, h);
    auto [L, B] = build_rumanov_L_B(P, x);
    Matrix2 Bx = mat(-(1.0 + P.q2) / 2.0, -2.0 * x + P.b, 0.0, -(1.0 - P.q2) / 2.0);
    auto Lfun = [&](double s) {
        auto st = aux.eval(s);
        auto pt = hm.eval_extended(s);
        auto q = aux::algebraic_params(s, pt.u, pt.ut, st.eps, st.alpha);
        return build_rumanov_L_B(q, x).first;
    };
    Matrix2 Lt = fd5m(Lfun, t, h);
    return Bx - Lt - (L * B - B * L);
}

std::pair<Matrix2, Matrix2> gauge_induced_L_B(const aux::LaxParams& p, double x) {
    double t = p.t, L = p.ut / p.u, eps = p.eps, q2 = p.q2;
    Matrix2 R = mat(eps * x / 2.0 - p.alpha, -1.0, eps * (2.0 - eps) / 4.0, 0.0);
    Matrix2 Ri = R.inverse();
    Matrix2 G = mat(-I1 / std::sqrt(p.u), 0.0, 0.0, I1 * std::sqrt(p.u));
    Matrix2 Gi = G.inverse();
    auto [L0, B0] = build_L0_B0(p2::HmPoint{p.u, p.ut, 0.0}, x, t);
    Matrix2 Rx = mat(eps / 2.0, 0.0, 0.0, 0.0);
    Matrix2 Rt = mat(p.q2t * x / 2.0 - p.alpha_t, 0.0, -q2 * p.q2t / 2.0, 0.0);
    Matrix2 Id = Matrix2::Identity();
    Matrix2 Lg = ((x * x - t) / 2.0) * Id + Rx * Ri + R * G * L0 * Gi * Ri;
    Matrix2 Bg = (-x / 2.0 + p.kt) * Id + Rt * Ri + R * (-(L / 2.0) * sigma3() + G * B0 * Gi) * Ri;
    return {Lg, Bg};
}

ScaledMatrix gauge_psi(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double x,
                       double t, const Matrix2& psi0) {
    auto st = aux.eval(t);
    double D = st.eps * (2.0 - st.eps);
    if (std::fabs(D) < 1e-12)
        fail(Errc::DegenerateGauge, fmt::format("gauge matrix singular at t = {} (1 - q2^2 = {})", t, D));
    auto p = hm.eval_extended(t);
    if (!(p.u > 0.0)) fail(Errc::Domain, "gauge needs u > 0");
    Matrix2 R = mat(st.eps * x / 2.0 - st.alpha, -1.0, D / 4.0, 0.0);
    Matrix2 G = mat(-I1 / std::sqrt(p.u), 0.0, 0.0, I1 * std::sqrt(p.u));
    ScaledMatrix out;
    out.m = std::exp(st.log_kappa) * R * G * psi0;
    out.log_scale = theta_of(x, t);
    return out;
}

std::array<std::vector<cplx>, 2> formal_column(int c, const p2::HmPoint& p, double t, int K) {
    if (c != 0 && c != 1) fail(Errc::Domain, "formal_column: column must be 0 or 1");
    if (K < 1) fail(Errc::Domain, "formal_column: need at least one term");
    double u = p.u, ut = p.ut, s = t + u * u;
    std::vector<double> f(K + 2, 0.0), g(K + 2, 0.0);  // first and second components
    auto at = [](const std::vector<double>& v, int k) { return k >= 0 ? v[k] : 0.0; };
    if (c == 1) {
        // e^{-theta} column: (a, b), a0 = 0, b0 = 1
        f[0] = 0.0;
        g[0] = 1.0;
        f[1] = -u;
        for (int k = 1; k <= K; ++k) {
            double R = -(k - 2) * at(f, k - 2) + s * f[k - 1] + ut * g[k - 1];
            g[k] = -(u * (-(k - 1) * f[k - 1] + s * f[k]) + ut * R) / k;
            f[k + 1] = R - u * g[k];
        }
    } else {
        // e^{theta} column: (c, d), c0 = 1, d0 = 0
        f[0] = 1.0;
        g[0] = 0.0;
        g[1] = u;
        for (int k = 1; k <= K; ++k) {
            double S = (k - 2) * at(g, k - 2) + s * g[k - 1] + ut * f[k - 1];
            f[k] = -(u * ((k - 1) * g[k - 1] + s * g[k]) - ut * S) / k;
            g[k + 1] = S + u * f[k];
        }
    }
    std::array<std::vector<cplx>, 2> out;
    for (int k = 0; k <= K; ++k) {
        out[0].push_back(f[k]);
        out[1].push_back(g[k]);
    }
    return out;
}

std::array<cplx, 2> formal_column_value(int c, const p2::HmPoint& p, double t, cplx x,
                                        int max_terms) {
    auto co = formal_column(c, p, t, max_terms);
    std::array<cplx, 2> sum{co[0][0], co[1][0]};
    cplx xinv = 1.0 / x, pw = 1.0;
    double prev = 1e300;
    for (int k = 1; k <= max_terms; ++k) {
        pw *= xinv;
        cplx a = co[0][k] * pw, b = co[1][k] * pw;
        double m = std::abs(a) + std::abs(b);
        if (k >= 3 && m > prev) break;
        sum[0] += a;
        sum[1] += b;
        if (m != 0.0) prev = m;
        if (m < 1e-18) break;
    }
    return sum;
}

Matrix2 PsiRow::psi(std::size_t i) const {
    Matrix2 m = Y[i];
    m.col(0) *= std::exp(theta[i]);
    m.col(1) *= std::exp(-theta[i]);
    return m;
}

PsiRow solve_psi0_row(const p2::Painleve2Solution& hm, const StokesData& stokes, double t,
                      const std::vector<double>& xs, const RowOptions& opt) {
    if (!std::is_sorted(xs.begin(), xs.end())) fail(Errc::Domain, "psi row: x nodes must be sorted");
    auto p = hm.eval_extended(t);
    RowCoeffs rc{p.u, p.ut, t};
    Matrix2 M = stokes.link63();
    bool full = opt.full || std::abs(M(1, 1)) > 1e-14;
    double X = opt.x_far;
    for (double x : xs) X = std::max(X, std::fabs(x) + 1.0);

    PsiRow row;
    row.t = t;
    row.x = xs;
    row.Y.assign(xs.size(), Matrix2::Zero());
    row.theta.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) row.theta[i] = theta_of(xs[i], t);

    std::size_t first_right = std::lower_bound(xs.begin(), xs.end(), 0.0) - xs.begin();

    // column 2 of Psi^(6): recessive on the positive axis, seeded at +X
    auto s2 = formal_column_value(1, p, t, X);
    Vec2 y{s2[0], s2[1]};
    double z = X;
    for (std::size_t i = xs.size(); i-- > first_right;) {
        y = propagate(rc, 1, y, z, xs[i], opt.max_step);
        z = xs[i];
        set_col(row.Y[i], 1, y);
    }
    Vec2 y6c2_0 = propagate(rc, 1, y, z, 0.0, opt.max_step);

    // column 1 of Psi^(3): recessive on the negative axis, seeded at -X
    auto s1 = formal_column_value(0, p, t, -X);
    Vec2 w{s1[0], s1[1]};
    z = -X;
    std::vector<Vec2> y3c1(first_right);
    for (std::size_t i = 0; i < first_right; ++i) {
        w = propagate(rc, 0, w, z, xs[i], opt.max_step);
        z = xs[i];
        y3c1[i] = w;
    }
    Vec2 y3c1_0 = propagate(rc, 0, w, z, 0.0, opt.max_step);

    Vec2 y3c2_0{0.0, 0.0};
    std::vector<Vec2> y3c2(first_right, Vec2{0.0, 0.0});
    if (full) {
        // column 2 of Psi^(3) from the ray arg x = -2pi/3; column 1 of Psi^(6) from arg x = pi/3
        cplx zr = X * std::exp(cplx(0.0, -2.0 * M_PI / 3.0));
        auto r2 = formal_column_value(1, p, t, zr);
        y3c2_0 = propagate(rc, 1, Vec2{r2[0], r2[1]}, zr, 0.0, opt.max_step);
        cplx zq = X * std::exp(cplx(0.0, M_PI / 3.0));
        auto r1 = formal_column_value(0, p, t, zq);
        Vec2 y6c1_0 = propagate(rc, 0, Vec2{r1[0], r1[1]}, zq, 0.0, opt.max_step);

        Vec2 link1{M(0, 0) * y3c1_0[0] + M(1, 0) * y3c2_0[0], M(0, 0) * y3c1_0[1] + M(1, 0) * y3c2_0[1]};
        row.stokes_error = std::max(std::abs(link1[0] - y6c1_0[0]), std::abs(link1[1] - y6c1_0[1])) /
                           std::max(1.0, vnorm(y6c1_0));

        Vec2 v = y6c1_0;
        z = 0.0;
        for (std::size_t i = first_right; i < xs.size(); ++i) {
            v = propagate(rc, 0, v, z, xs[i], opt.max_step);
            z = xs[i];
            set_col(row.Y[i], 0, v);
        }
        v = y3c2_0;
        z = 0.0;
        for (std::size_t i = first_right; i-- > 0;) {
            v = propagate(rc, 1, v, z, xs[i], opt.max_step);
            z = xs[i];
            y3c2[i] = v;
        }
    }

    // Psi^(6) = Psi^(3) M on the negative axis, written for Y
    for (std::size_t i = 0; i < first_right; ++i) {
        double th = row.theta[i];
        double e2p = std::exp(2.0 * th);
        Vec2 c2{M(0, 1) * e2p * y3c1[i][0] + M(1, 1) * y3c2[i][0],
                M(0, 1) * e2p * y3c1[i][1] + M(1, 1) * y3c2[i][1]};
        set_col(row.Y[i], 1, c2);
        if (full) {
            double e2m = std::exp(-2.0 * th);
            Vec2 c1{M(0, 0) * y3c1[i][0] + M(1, 0) * e2m * y3c2[i][0],
                    M(0, 0) * y3c1[i][1] + M(1, 0) * e2m * y3c2[i][1]};
            set_col(row.Y[i], 0, c1);
        }
    }

    Vec2 left{M(0, 1) * y3c1_0[0] + M(1, 1) * y3c2_0[0], M(0, 1) * y3c1_0[1] + M(1, 1) * y3c2_0[1]};
    row.match_error = std::max(std::abs(left[0] - y6c2_0[0]), std::abs(left[1] - y6c2_0[1])) /
                      std::max(1.0, vnorm(y6c2_0));
    if (!(row.match_error <= opt.match_tol))
        fail(Errc::MatchFailure,
             fmt::format("Psi0 left/right mismatch {:.3e} at t = {} exceeds {:.1e}", row.match_error,
                         t, opt.match_tol));
    if (full) {
        for (const auto& m : row.Y) row.det_drift = std::max(row.det_drift, std::abs(m.determinant() - 1.0));
    }
    return row;
}

cplx psi11_from_column(const aux::AuxState& st, const p2::HmPoint& p, double x, cplx y12, cplx y22) {
    double r11 = st.eps * x / 2.0 - st.alpha;
    return std::exp(st.log_kappa_sqrt_u) * (r11 * y12 / p.u + y22);
}

FieldGrid build_field(const p2::Painleve2Solution& hm, const aux::AuxSolution* aux, FieldKind kind,
                      double x_lo, double x_hi, double t_lo, double t_hi, double h, int margin,
                      const RowOptions& opt_in) {
    if (!(h > 0) || !(x_lo < x_hi) || !(t_lo < t_hi) || margin < 1)
        fail(Errc::BadInterval, "build_field: bad grid specification");
    if (kind == FieldKind::Beta6 && (!aux || !aux->has_kappa))
        fail(Errc::Domain, "build_field: beta = 6 needs an auxiliary solution with kappa");
    FieldGrid g;
    g.kind = kind;
    g.hx = g.ht = h;
    long nx = std::lround((x_hi - x_lo) / h) + 2 * margin + 1;
    long nt = std::lround((t_hi - t_lo) / h) + 2 * margin + 1;
    for (long i = 0; i < nx; ++i) g.x.push_back(x_lo + h * (double)(i - margin));
    for (long i = 0; i < nt; ++i) g.t.push_back(t_lo + h * (double)(i - margin));
    g.f.assign((std::size_t)(nx * nt), 0.0);
    RowOptions opt = opt_in;
    opt.full = false;
    auto stokes = StokesData::hastings_mcleod();

    std::vector<double> match((std::size_t)nt, 0.0);
    std::vector<std::exception_ptr> errs((std::size_t)nt);
    auto work = [&](std::size_t it) {
        try {
            double t = g.t[it];
            auto row = solve_psi0_row(hm, stokes, t, g.x, opt);
            match[it] = row.match_error;
            auto p = hm.eval_extended(t);
            if (kind == FieldKind::Beta6) {
                auto st = aux->eval(t);
                for (std::size_t ix = 0; ix < g.x.size(); ++ix)
                    g.f[it * g.x.size() + ix] =
                        psi11_from_column(st, p, g.x[ix], row.Y[ix](0, 1), row.Y[ix](1, 1));
            } else {
                double e = std::exp(hm.omega_tail_integral(t));
                for (std::size_t ix = 0; ix < g.x.size(); ++ix)
                    g.f[it * g.x.size() + ix] = row.Y[ix](1, 1) * e;
            }
        } catch (...) {
            errs[it] = std::current_exception();
        }
    };
    int nw = std::max(1, std::min(util::worker_count(), (int)nt));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t it = (std::size_t)w; it < (std::size_t)nt; it += (std::size_t)nw) work(it);
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    g.max_match_error = *std::max_element(match.begin(), match.end());
    return g;
}

std::string FieldGrid::to_csv() const {
    std::string out = "x,t,re,im,log_scale\n";
    for (std::size_t it = 0; it < t.size(); ++it)
        for (std::size_t ix = 0; ix < x.size(); ++ix) {
            cplx v = at(it, ix);
            out += util::csv_row({x[ix], t[it], v.real(), v.imag(), 0.0});
        }
    return out;
}

PdeReport bv_pde_residual(const FieldGrid& g, double c_t, int margin) {
    PdeReport r;
    std::size_t nx = g.x.size(), nt = g.t.size();
    if (margin < 1 || nx < 2 * (std::size_t)margin + 1 || nt < 2 * (std::size_t)margin + 1)
        fail(Errc::BadInterval, "bv_pde_residual: grid too small for the margin");
    double fmax = 0, imax = 0;
    for (const auto& v : g.f) {
        fmax = std::max(fmax, std::abs(v));
        imax = std::max(imax, std::fabs(v.imag()));
    }
    r.max_imag = fmax > 0 ? imax / fmax : 0.0;
    for (std::size_t it = (std::size_t)margin; it + (std::size_t)margin < nt; ++it)
        for (std::size_t ix = (std::size_t)margin; ix + (std::size_t)margin < nx; ++ix) {
            double x = g.x[ix], t = g.t[it];
            cplx ft = (g.at(it + 1, ix) - g.at(it - 1, ix)) / (2.0 * g.ht);
            cplx fx = (g.at(it, ix + 1) - g.at(it, ix - 1)) / (2.0 * g.hx);
            cplx fxx = (g.at(it, ix + 1) - 2.0 * g.at(it, ix) + g.at(it, ix - 1)) / (g.hx * g.hx);
            double res = std::abs(c_t * ft + fxx + (t - x * x) * fx);
            ++r.nodes;
            if (res > r.max_residual) {
                r.max_residual = res;
                r.x_at = x;
                r.t_at = t;
            }
        }
    return r;
}

double wkb_defect(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double x, double t) {
    auto row = solve_psi0_row(hm, StokesData::hastings_mcleod(), t, {x});
    Matrix2 Y = row.Y[0];
    auto W = gauge_psi(hm, aux, x, t, I1 * Y).m;
    auto st = aux.eval(t);
    auto p = hm.eval_extended(t);
    double D = st.eps * (2.0 - st.eps);
    Matrix2 R = mat(st.eps * x / 2.0 - st.alpha, -1.0, D / 4.0, 0.0);
    Matrix2 G = mat(-I1 / std::sqrt(p.u), 0.0, 0.0, I1 * std::sqrt(p.u));
    Matrix2 V = R.inverse() * W * G.inverse() / (I1 * std::exp(st.log_kappa));
    Matrix2 Dm = x * (V - Matrix2::Identity());
    auto P = aux::reconstruct_params(aux, hm, t);
    auto r = aux::eval_r_and_integrals(P);
    double m11 = r.r2 * r.r2 - r.r0 - P.q1 / 2.0 + P.alpha;
    return std::max({std::abs(Dm(0, 0) - m11), std::abs(Dm(0, 1) - 1.0), std::abs(Dm(1, 1) + m11)});
}

}  // namespace twlab::lax
