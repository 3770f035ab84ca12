#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace twlab::specfun {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::pair<double, double> interval;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

struct AiryValue {
    double ai;
    double ai_prime;
};

inline constexpr double kAiryMin = -30.0;
inline constexpr double kAiryMax = 30.0;

// Ai and Ai' on [-30, 30]. Throws Errc::Domain outside.
AiryValue airy(double t);

// Branch-level access used by the cross-over consistency check.
AiryValue airy_maclaurin(double t);
AiryValue airy_asymptotic(double t);

// Largest |Ai_series - Ai_asymptotic| (and same for Ai') at t = -5 and t = +5.
double airy_crossover_mismatch();

// Gauss-Legendre rule with m nodes mapped to (a, b). Rules on (-1,1) are cached.
QuadratureRule gauss_legendre(int m, double a, double b);

struct TailOptions {
    int order = 20;        // Gauss-Legendre nodes per panel
    double ratio = 1.5;    // geometric growth of panel length
    int max_panels = 60;
    double rel_cut = 1e-15;
};

// Integral of f over [t0, inf) by geometrically growing Gauss-Legendre panels.
// Throws Errc::NonConvergence if the panel sequence has not met the cut.
double integrate_to_infinity(const std::function<double(double)>& f, double t0,
                             double decay_scale, const TailOptions& opt = {});

// Composite Gauss-Legendre over [a, b] with k equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order = 10);

}  // namespace twlab::specfun
