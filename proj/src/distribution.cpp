#include "twlab/distribution.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <json.hpp>
#include <thread>

#include "interp.hpp"
#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"
#include "twlab/util.hpp"

namespace twlab::dist {

namespace {

const double kScale = std::cbrt(9.0);  // 3^{2/3}

struct Local {
    double u2, L, omega;
};

Local local(const p2::Painleve2Solution& hm, double s) {
    auto p = hm.eval_extended(s);
    return {p.u * p.u, p.u > 0 ? p.ut / p.u : 0.0, p.omega};
}

// g = omega/3 + 2 alpha/3 - L eps/3, the integrand of log(kappa u^{1/2}) read from +inf.
double g_slaved(const p2::Painleve2Solution& hm, double s, double* eps_out = nullptr) {
    auto q = local(hm, s);
    if (q.u2 == 0.0) {
        if (eps_out) *eps_out = 0.0;
        return q.omega / 3.0;
    }
    auto [A, E] = aux::slaved_coefficients(s, q.L);
    if (eps_out) *eps_out = E * q.u2;
    return q.omega / 3.0 + (2.0 / 3.0) * A * q.u2 - q.L * E * q.u2 / 3.0;
}

double tail_g(const p2::Painleve2Solution& hm, double t) {
    return specfun::integrate_to_infinity([&](double s) { return g_slaved(hm, s); }, t, 0.5);
}

double quotient_tail(const p2::Painleve2Solution& hm, double t) {
    auto f = [&](double s) {
        auto q = local(hm, s);
        if (q.u2 == 0.0) return 0.0;
        auto [A, E] = aux::slaved_coefficients(s, q.L);
        double eps = E * q.u2;
        return q.L * eps / (eps - 1.0);
    };
    return specfun::integrate_to_infinity(f, t, 0.5);
}

int panel_count(double a, double b) { return std::max(1, (int)std::ceil((b - a) / 0.125)); }

void hash_vectors(std::initializer_list<const std::vector<double>*> vs, std::uint64_t& h) {
    for (const auto* v : vs) {
        std::string_view bytes(reinterpret_cast<const char*>(v->data()), v->size() * sizeof(double));
        h ^= util::fnv1a64(bytes) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
}

}  // namespace

double internal_t(double T) { return kScale * T; }
double external_t(double t) { return t / kScale; }

double eval_logF2(const p2::Painleve2Solution& hm, double t) {
    if (t < hm.t_min())
        fail(Errc::OutOfRange, fmt::format("F2: t = {} below the solved interval [{}, ...)", t, hm.t_min()));
    return hm.omega_tail_integral(t);
}

double eval_F2(const p2::Painleve2Solution& hm, double t) { return std::exp(eval_logF2(hm, t)); }

double eval_logF6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t,
                  F6Form form) {
    if (!aux.has_kappa) fail(Errc::Domain, "F6 needs an auxiliary solution with kappa");
    double ts = aux.t_start;
    if (t < aux.t.front())
        fail(Errc::OutOfRange, fmt::format("F6: t = {} below the auxiliary interval", t));
    if (t >= ts) {
        double eps = 0.0;
        g_slaved(hm, t, &eps);
        if (form == F6Form::Quotient) {
            return std::log((2.0 - eps) / (2.0 * (1.0 - eps))) + hm.omega_tail_integral(t) / 3.0 -
                   (2.0 / 3.0) * quotient_tail(hm, t);
        }
        return tail_g(hm, t) + std::log1p(-eps / 2.0);
    }
    auto st = aux.eval(t);
    switch (form) {
        case F6Form::Regular:
            return st.log_kappa_sqrt_u + tail_g(hm, ts) + std::log1p(-st.eps / 2.0);
        case F6Form::Alpha: {
            auto g = [&](double s) {
                auto a = aux.eval(s);
                auto q = local(hm, s);
                return q.omega / 3.0 + (2.0 / 3.0) * a.alpha - q.L * a.eps / 3.0;
            };
            double I = specfun::integrate_panels(g, t, ts, panel_count(t, ts));
            return I + tail_g(hm, ts) + std::log1p(-st.eps / 2.0);
        }
        case F6Form::Quotient: {
            auto lo = std::lower_bound(aux.t.begin(), aux.t.end(), t) - aux.t.begin();
            for (std::size_t i = (std::size_t)lo; i < aux.t.size(); ++i)
                if (aux.eps[i] >= 1.0)
                    fail(Errc::QZeroCrossing,
                         fmt::format("q2 vanishes near t = {} inside [{}, {}]", aux.t[i], t, ts));
            if (st.eps >= 1.0) fail(Errc::QZeroCrossing, fmt::format("q2 >= 0 at t = {}", t));
            auto f = [&](double s) {
                auto a = aux.eval(s);
                return local(hm, s).L * a.eps / (a.eps - 1.0);
            };
            double I = specfun::integrate_panels(f, t, ts, panel_count(t, ts)) + quotient_tail(hm, ts);
            return std::log((2.0 - st.eps) / (2.0 * (1.0 - st.eps))) + hm.omega_tail_integral(t) / 3.0 -
                   (2.0 / 3.0) * I;
        }
    }
    fail(Errc::Internal, "unknown F6 form");
}

double eval_F6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t, F6Form form) {
    return std::exp(eval_logF6(hm, aux, t, form));
}

double dlogF6(const p2::Painleve2Solution& hm, const aux::AuxSolution& aux, double t) {
    auto st = aux.eval(t);
    auto q = local(hm, t);
    double g = q.omega / 3.0 + (2.0 / 3.0) * st.alpha - q.L * st.eps / 3.0;
    return -g - aux.eps_t(t) / (2.0 - st.eps);
}

std::string provenance_hash(const p2::Painleve2Solution& hm) {
    std::uint64_t h = 0;
    std::vector<double> meta{hm.t_min(), hm.t_max()};
    hash_vectors({&meta, &hm.u(), &hm.ut()}, h);
    return util::hex64(h);
}

std::string provenance_hash(const aux::AuxSolution& aux) {
    std::uint64_t h = 1;
    std::vector<double> meta{aux.t_start, aux.t_end, aux.tol, (double)aux.route, (double)aux.init};
    hash_vectors({&meta, &aux.eps, &aux.alpha, &aux.log_kappa_sqrt_u}, h);
    return util::hex64(h);
}

double DistTable::cdf(double x) const {
    if (t.empty()) fail(Errc::Domain, "empty table");
    if (x <= t.front()) return F.front();
    if (x >= t.back()) return F.back();
    std::size_t i = std::upper_bound(t.begin(), t.end(), x) - t.begin() - 1;
    i = std::min(i, t.size() - 2);
    double h = t[i + 1] - t[i];
    return detail::hermite(F[i], pdf[i], F[i + 1], pdf[i + 1], h, (x - t[i]) / h);
}

std::string DistTable::to_csv() const {
    std::string out = "t,F,logF,pdf\n";
    for (std::size_t i = 0; i < t.size(); ++i) out += util::csv_row({t[i], F[i], logF[i], pdf[i]});
    return out;
}

std::string DistTable::metadata_json() const {
    nlohmann::ordered_json j;
    j["beta"] = beta;
    j["rows"] = t.size();
    j["t_min"] = t.empty() ? 0.0 : t.front();
    j["t_max"] = t.empty() ? 0.0 : t.back();
    j["hm_hash"] = hm_hash;
    if (beta == 6) {
        j["aux_hash"] = aux_hash;
        j["aux_tol"] = aux_tol;
    }
    return j.dump(2);
}

DistTable tabulate(int beta, const std::vector<double>& grid, const p2::Painleve2Solution& hm,
                   const aux::AuxSolution* aux) {
    if (beta != 2 && beta != 6) fail(Errc::Domain, fmt::format("beta = {} is not supported", beta));
    if (beta == 6 && !aux) fail(Errc::Domain, "beta = 6 table needs an auxiliary solution");
    std::size_t n = grid.size();
    if (n < 5) fail(Errc::BadInterval, "table needs at least 5 nodes");
    double h = grid[1] - grid[0];
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1]) || std::fabs(grid[i] - grid[i - 1] - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            fail(Errc::BadInterval, "table grid must be uniform and increasing");

    DistTable tb;
    tb.beta = beta;
    tb.t = grid;
    tb.F.assign(n, 0.0);
    tb.logF.assign(n, 0.0);
    tb.pdf.assign(n, 0.0);
    tb.hm_hash = provenance_hash(hm);
    if (aux) {
        tb.aux_hash = provenance_hash(*aux);
        tb.aux_tol = aux->tol;
    }

    std::vector<std::exception_ptr> errs(n);
    auto work = [&](std::size_t i) {
        try {
            tb.logF[i] = beta == 2 ? eval_logF2(hm, grid[i]) : eval_logF6(hm, *aux, internal_t(grid[i]));
            tb.F[i] = std::exp(tb.logF[i]);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    int nw = std::max(1, std::min<int>(util::worker_count(), (int)n));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = (std::size_t)w; i < n; i += (std::size_t)nw) work(i);
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    const auto& F = tb.F;
    for (std::size_t i = 0; i < n; ++i) {
        double d;
        if (i >= 2 && i + 2 < n)
            d = (F[i - 2] - 8 * F[i - 1] + 8 * F[i + 1] - F[i + 2]) / (12 * h);
        else if (i < 2)
            d = (-25 * F[i] + 48 * F[i + 1] - 36 * F[i + 2] + 16 * F[i + 3] - 3 * F[i + 4]) / (12 * h);
        else
            d = (25 * F[i] - 48 * F[i - 1] + 36 * F[i - 2] - 16 * F[i - 3] + 3 * F[i - 4]) / (12 * h);
        // analytic where the solutions cover t; differences only past their ends
        try {
            d = beta == 2 ? -tb.F[i] * hm.eval(grid[i]).omega
                          : tb.F[i] * kScale * dlogF6(hm, *aux, internal_t(grid[i]));
        } catch (const Error&) {
        }
        tb.pdf[i] = std::max(0.0, d);
    }
    return tb;
}

double quantile(const DistTable& tb, double p) {
    if (tb.t.size() < 2) fail(Errc::Domain, "quantile: empty table");
    if (!(p > tb.F.front() && p < tb.F.back()))
        fail(Errc::OutOfSupportedRange,
             fmt::format("p = {} outside the table coverage ({}, {})", p, tb.F.front(), tb.F.back()));
    double lo = tb.t.front(), hi = tb.t.back();
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = tb.cdf(mid);
        if (std::fabs(v - p) <= 1e-12 || hi - lo < 1e-14) return mid;
        (v < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace twlab::dist
