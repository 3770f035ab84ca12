#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace twlab::oracle {

// det(I - K_Airy) on L^2(t, inf) by Nystrom with m Gauss-Legendre nodes on (t, b),
// b = max(t, 0) + 16; Ai^2 is below 1e-38 past b. Errc::Domain for m < 40 or t < -10,
// Errc::FredholmFailure if the determinant is not positive.
double airy_kernel_fredholm(double t, int m = 60);

// Airy kernel value, with the diagonal limit used for |x - y| < 1e-6.
double airy_kernel(double x, double y);

struct EdgeSampleSet {
    int n = 0;
    double beta = 0;
    std::uint64_t seed = 0;
    std::vector<double> lambda_max;  // largest eigenvalue, weight exp(-beta sum lambda^2 / 2)
    std::vector<double> samples;     // sqrt(2) n^{1/6} (lambda_max - sqrt(2n)), same order
    std::string to_csv() const;
};

// Per-sample generator: mt19937_64 seeded from splitmix64 of (seed, index).
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

// chi variate with k degrees of freedom (k > 0 real).
double draw_chi(std::mt19937_64& rng, double k);

// Largest eigenvalue of the symmetric tridiagonal matrix (diag, off) by Sturm bisection.
// Errc::EigenFailure if the Gershgorin bracket fails to contain it.
double largest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off);

// Tridiagonal model H / sqrt(2 beta): H has diagonal N(0, 2) and off-diagonal chi_{beta(n-k)},
// k = 1..n-1, so the eigenvalue density carries exp(-beta sum lambda^2 / 2).
// Errc::Domain for n < 50, beta <= 0 or count < 1.
EdgeSampleSet sample_edge(int n, double beta, int count, std::uint64_t seed);

// sup |F_emp - cdf| over the sorted samples.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace twlab::oracle
