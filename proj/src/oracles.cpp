#include "twlab/oracles.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "twlab/errors.hpp"
#include "twlab/specfun.hpp"
#include "twlab/util.hpp"

namespace twlab::oracle {

namespace {

specfun::AiryValue airy_clamped(double x) {
    if (x > specfun::kAiryMax) return {0.0, 0.0};
    return specfun::airy(x);
}

}  // namespace

double airy_kernel(double x, double y) {
    auto a = airy_clamped(x), b = airy_clamped(y);
    if (std::fabs(x - y) < 1e-6) {
        double m = 0.5 * (x + y);
        auto c = airy_clamped(m);
        return c.ai_prime * c.ai_prime - m * c.ai * c.ai;
    }
    return (a.ai * b.ai_prime - a.ai_prime * b.ai) / (x - y);
}

double airy_kernel_fredholm(double t, int m) {
    if (m < 40) fail(Errc::Domain, fmt::format("Fredholm order m = {} below 40", m));
    if (t < -10.0) fail(Errc::Domain, fmt::format("Fredholm oracle needs t >= -10, got {}", t));
    double b = std::max(t, 0.0) + 16.0;
    auto rule = specfun::gauss_legendre(m, t, b);
    std::vector<specfun::AiryValue> av(m);
    std::vector<double> sw(m);
    for (int i = 0; i < m; ++i) {
        av[i] = airy_clamped(rule.nodes[i]);
        sw[i] = std::sqrt(rule.weights[i]);
    }
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double x = rule.nodes[i], y = rule.nodes[j], k;
            if (i == j)
                k = av[i].ai_prime * av[i].ai_prime - x * av[i].ai * av[i].ai;
            else
                k = (av[i].ai * av[j].ai_prime - av[i].ai_prime * av[j].ai) / (x - y);
            A(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
        }
    double det = A.partialPivLu().determinant();
    if (!(det > 0.0))
        fail(Errc::FredholmFailure, fmt::format("Fredholm determinant {} at t = {} is not positive", det, t));
    return det;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (index * 0xd1b54a32d192ed03ULL);
    std::uint64_t a = util::splitmix64(state);
    std::uint64_t b = util::splitmix64(state);
    std::seed_seq seq{(std::uint32_t)a, (std::uint32_t)(a >> 32), (std::uint32_t)b, (std::uint32_t)(b >> 32)};
    return std::mt19937_64(seq);
}

double draw_chi(std::mt19937_64& rng, double k) {
    if (!(k > 0)) fail(Errc::Domain, "chi degrees of freedom must be positive");
    std::chi_squared_distribution<double> chi2(k);
    return std::sqrt(chi2(rng));
}

double largest_eigenvalue(const std::vector<double>& d, const std::vector<double>& e) {
    std::size_t n = d.size();
    if (n == 0 || e.size() + 1 != n) fail(Errc::Domain, "tridiagonal sizes do not match");
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    // number of eigenvalues below x
    auto below = [&](double x) {
        std::size_t c = 0;
        double q = d[0] - x;
        for (std::size_t i = 0;; ++i) {
            if (q == 0.0) q = -1e-300;
            if (q < 0) ++c;
            if (i + 1 == n) break;
            q = d[i + 1] - x - e[i] * e[i] / q;
        }
        return c;
    };
    double span = hi - lo;
    lo -= 1e-12 * span + 1e-300;
    hi += 1e-12 * span + 1e-300;
    if (below(hi) != n || below(lo) != 0)
        fail(Errc::EigenFailure, "Sturm count does not bracket the spectrum");
    while (hi - lo > 4e-16 * std::max(std::fabs(lo), std::fabs(hi))) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (below(mid) == n ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

EdgeSampleSet sample_edge(int n, double beta, int count, std::uint64_t seed) {
    if (n < 50) fail(Errc::Domain, fmt::format("edge sampling needs n >= 50, got {}", n));
    if (!(beta > 0)) fail(Errc::Domain, "beta must be positive");
    if (count < 1) fail(Errc::Domain, "sample count must be positive");
    EdgeSampleSet s;
    s.n = n;
    s.beta = beta;
    s.seed = seed;
    s.lambda_max.assign((std::size_t)count, 0.0);
    s.samples.assign((std::size_t)count, 0.0);
    double scale = 1.0 / std::sqrt(2.0 * beta), edge = std::sqrt(2.0 * n);
    double sfac = std::sqrt(2.0) * std::pow((double)n, 1.0 / 6.0);

    auto one = [&](std::size_t idx) {
        auto rng = sample_stream(seed, idx);
        std::normal_distribution<double> gauss(0.0, std::sqrt(2.0));
        std::vector<double> d((std::size_t)n), e((std::size_t)n - 1);
        for (int k = 0; k < n; ++k) d[(std::size_t)k] = scale * gauss(rng);
        for (int k = 1; k < n; ++k) e[(std::size_t)k - 1] = scale * draw_chi(rng, beta * (n - k));
        double lm = largest_eigenvalue(d, e);
        s.lambda_max[idx] = lm;
        s.samples[idx] = sfac * (lm - edge);
    };
    int nw = std::max(1, std::min(util::worker_count(), count));
    std::vector<std::exception_ptr> errs((std::size_t)nw);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = (std::size_t)w; i < (std::size_t)count; i += (std::size_t)nw) one(i);
            } catch (...) {
                errs[(std::size_t)w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return s;
}

std::string EdgeSampleSet::to_csv() const {
    std::string out = "index,lambda_max,scaled_s\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        out += util::csv_row({(double)i, lambda_max[i], samples[i]});
    return out;
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) fail(Errc::Domain, "KS distance of an empty sample");
    std::sort(x.begin(), x.end());
    double n = (double)x.size(), d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double F = cdf(x[i]);
        d = std::max({d, (double)(i + 1) / n - F, F - (double)i / n});
    }
    return d;
}

}  // namespace twlab::oracle
