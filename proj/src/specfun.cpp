#include "twlab/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "twlab/errors.hpp"

namespace twlab::specfun {

namespace {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kAip0 = -0.258819403792806798405183560189203963L;

// Anchor of the asymptotic branch. At |t| = 12 the optimally truncated
// expansion is good to ~1e-24; between 5 and 12 we walk there by Taylor steps.
constexpr double kAnchor = 12.0;
constexpr double kSplit = 5.0;

AiryValue maclaurin(ld t) {
    // y'' = t y: a_{n+3} = a_n / ((n+2)(n+3)), a_0 = Ai(0), a_1 = Ai'(0), a_2 = 0
    ld a[3] = {kAi0, kAip0, 0.0L};
    ld y = 0.0L, yp = 0.0L, tp = 1.0L, tpm1 = 0.0L;
    int quiet = 0;  // consecutive negligible terms; one slot in three is zero
    for (int n = 0; n < 300; ++n) {
        ld c = a[n % 3];
        ld term = c * tp;
        ld dterm = n > 0 ? n * c * tpm1 : 0.0L;
        y += term;
        yp += dterm;
        a[n % 3] = c / ((ld)(n + 2) * (ld)(n + 3));
        tpm1 = tp;
        tp *= t;
        quiet = (std::fabs(term) < 1e-26L && std::fabs(dterm) < 1e-26L) ? quiet + 1 : 0;
        if (n > 10 && quiet >= 3) break;
    }
    return {(double)y, (double)yp};
}

struct LdPair {
    ld y, yp;
};

LdPair asymptotic_ld(ld t) {
    const ld pi = std::numbers::pi_v<long double>;
    const ld x = std::fabs(t);
    const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const ld x14 = std::pow(x, 0.25L);
    // u_k, v_k coefficients, truncated at the smallest term.
    ld uk[80], vk[80];
    uk[0] = 1.0L;
    vk[0] = 1.0L;
    int kmax = 1;
    for (int k = 1; k < 80; ++k) {
        uk[k] = uk[k - 1] * (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) /
                ((2.0L * k - 1) * 216.0L * k);
        vk[k] = -(6.0L * k + 1) / (6.0L * k - 1) * uk[k];
        ld mag = std::fabs(uk[k]) / std::pow(zeta, (ld)k);
        ld prev = std::fabs(uk[k - 1]) / std::pow(zeta, (ld)(k - 1));
        kmax = k;
        if (mag > prev || mag < 1e-30L) break;
    }
    if (t > 0) {
        ld su = 0, sv = 0, zp = 1;
        for (int k = 0; k < kmax; ++k) {
            ld sg = (k % 2) ? -1.0L : 1.0L;
            su += sg * uk[k] / zp;
            sv += sg * vk[k] / zp;
            zp *= zeta;
        }
        ld e = std::exp(-zeta) / (2.0L * std::sqrt(pi));
        return {e / x14 * su, -x14 * e * sv};
    }
    ld ue = 0, uo = 0, ve = 0, vo = 0, zp = 1;
    for (int k = 0; k < kmax; ++k) {
        int j = k / 2;
        ld sg = (j % 2) ? -1.0L : 1.0L;
        if (k % 2 == 0) {
            ue += sg * uk[k] / zp;
            ve += sg * vk[k] / zp;
        } else {
            uo += sg * uk[k] / zp;
            vo += sg * vk[k] / zp;
        }
        zp *= zeta;
    }
    ld ph = zeta - pi / 4.0L;
    ld c = std::cos(ph), s = std::sin(ph);
    ld rp = 1.0L / std::sqrt(pi);
    return {rp / x14 * (c * ue + s * uo), rp * x14 * (s * ve - c * vo)};
}

// One Taylor step of y'' = t y from t0 to t0 + h.
LdPair taylor_step(ld t0, LdPair v, ld h) {
    ld a0 = v.y, a1 = v.yp;
    ld y = a0 + a1 * h, yp = a1;
    ld hp = h;               // h^k
    ld ak_m1 = a0, ak = a1;  // a_{k-1}, a_k with k = 1
    ld a_km2 = 0.0L;         // a_{k-2}
    for (int k = 1; k < 120; ++k) {
        // a_{k+1} = (t0 a_{k-1} + a_{k-2}) / (k (k+1))
        ld anext = (t0 * ak_m1 + a_km2) / ((ld)k * (ld)(k + 1));
        ld termd = (k + 1) * anext * hp;
        hp *= h;
        ld term = anext * hp;
        y += term;
        yp += termd;
        a_km2 = ak_m1;
        ak_m1 = ak;
        ak = anext;
        if (k > 20 && std::fabs(term) < 1e-26L * (1.0L + std::fabs(y)) &&
            std::fabs(termd) < 1e-26L * (1.0L + std::fabs(yp)))
            break;
    }
    return {y, yp};
}

AiryValue anchored(double t) {
    ld anchor = t > 0 ? kAnchor : -kAnchor;
    LdPair v = asymptotic_ld(anchor);
    ld cur = anchor;
    ld dist = (ld)t - anchor;
    int steps = (int)std::ceil(std::fabs((double)dist) / 0.5);
    if (steps < 1) steps = 1;
    ld h = dist / steps;
    for (int i = 0; i < steps; ++i) {
        v = taylor_step(cur, v, h);
        cur += h;
    }
    return {(double)v.y, (double)v.yp};
}

}  // namespace

AiryValue airy_maclaurin(double t) { return maclaurin((ld)t); }

AiryValue airy_asymptotic(double t) {
    if (std::fabs(t) >= kAnchor) {
        LdPair v = asymptotic_ld((ld)t);
        return {(double)v.y, (double)v.yp};
    }
    return anchored(t);
}

AiryValue airy(double t) {
    if (!(t >= kAiryMin && t <= kAiryMax))
        fail(Errc::Domain, "airy: argument outside [-30, 30]");
    if (std::fabs(t) <= kSplit) return airy_maclaurin(t);
    return airy_asymptotic(t);
}

double airy_crossover_mismatch() {
    double worst = 0.0;
    for (double t : {-kSplit, kSplit}) {
        AiryValue a = airy_maclaurin(t), b = airy_asymptotic(t);
        worst = std::max(worst, std::fabs(a.ai - b.ai));
        worst = std::max(worst, std::fabs(a.ai_prime - b.ai_prime));
    }
    return worst;
}

namespace {

struct BaseRule {
    std::vector<double> x, w;
};

BaseRule make_base(int m) {
    BaseRule r;
    r.x.resize(m);
    r.w.resize(m);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        ld z = std::cos(pi * (i + 0.75) / (m + 0.5));
        ld pp = 0;
        for (int it = 0; it < 100; ++it) {
            ld p1 = 1.0L, p2 = 0.0L;
            for (int j = 1; j <= m; ++j) {
                ld p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0L);
            ld dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        // recompute derivative at the converged root
        ld p1 = 1.0L, p2 = 0.0L;
        for (int j = 1; j <= m; ++j) {
            ld p3 = p2;
            p2 = p1;
            p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
        }
        pp = m * (z * p1 - p2) / (z * z - 1.0L);
        double wi = (double)(2.0L / ((1.0L - z * z) * pp * pp));
        r.x[i] = -(double)z;
        r.x[m - 1 - i] = (double)z;
        r.w[i] = wi;
        r.w[m - 1 - i] = wi;
    }
    if (m % 2 == 1) r.x[m / 2] = 0.0;
    return r;
}

const BaseRule& base_rule(int m) {
    static std::mutex mu;
    static std::map<int, BaseRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, make_base(m)).first;
    return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int m, double a, double b) {
    if (m < 2) fail(Errc::Domain, "gauss_legendre: need m >= 2");
    if (!(a < b)) fail(Errc::Domain, "gauss_legendre: need a < b");
    const BaseRule& br = base_rule(m);
    QuadratureRule q;
    q.interval = {a, b};
    q.nodes.resize(m);
    q.weights.resize(m);
    double c = 0.5 * (a + b), r = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        q.nodes[i] = c + r * br.x[i];
        q.weights[i] = r * br.w[i];
    }
    return q;
}

double integrate_to_infinity(const std::function<double(double)>& f, double t0,
                             double decay_scale, const TailOptions& opt) {
    if (!(decay_scale > 0)) fail(Errc::Domain, "integrate_to_infinity: decay_scale must be positive");
    const BaseRule& br = base_rule(opt.order);
    double total = 0.0, a = t0, len = decay_scale;
    for (int p = 0; p < opt.max_panels; ++p) {
        double b = a + len;
        double c = 0.5 * (a + b), r = 0.5 * len, s = 0.0;
        for (int i = 0; i < opt.order; ++i) s += br.w[i] * f(c + r * br.x[i]);
        s *= r;
        total += s;
        if (std::fabs(s) <= opt.rel_cut * std::fabs(total)) return total;
        if (s == 0.0 && total == 0.0 && p > 2) return total;
        a = b;
        len *= opt.ratio;
    }
    fail(Errc::NonConvergence, "integrate_to_infinity: panel budget exhausted");
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order) {
    const BaseRule& br = base_rule(order);
    double h = (b - a) / panels, total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, c = lo + 0.5 * h, r = 0.5 * h, s = 0.0;
        for (int i = 0; i < order; ++i) s += br.w[i] * f(c + r * br.x[i]);
        total += s * r;
    }
    return total;
}

}  // namespace twlab::specfun
