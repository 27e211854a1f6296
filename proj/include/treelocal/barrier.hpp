#pragma once

#include <cstdint>
#include <vector>

#include "treelocal/rng.hpp"

namespace treelocal {

struct bridge_path {
    int k;
    double r, u;
    std::vector<double> X;  // size k+1, X[0] = r, X[k] = u exactly
};

// Pinned Gaussian walk bridge: X_j = r + (j/k)(u-r) + W_j - (j/k) W_k for a
// Normal(0,1/2)-step walk W from 0.
bridge_path sample_bridge(int k, double r, double u, rng_t& rng);

// Symmetric barrier profile gamma(j) = a + min(j, k-j)^sigma.
struct barrier_profile {
    int k;
    double a;
    double sigma;

    barrier_profile(int k_, double a_, double sigma_);
    double operator()(int j) const;
    std::vector<double> values() const;  // gamma(0..k)
};

struct ballot_estimate {
    double p = 0.0;        // grid-event estimate: all X_j >= gamma(j), 1 <= j <= k-1
    double se = 0.0;
    double p_bridge = 0.0;  // continuum-event estimate (zero barrier only)
    double se_bridge = 0.0;
    bool has_bridge = false;
    std::uint64_t n = 0;
};

// MC ballot probability for a pinned bridge against a barrier given as
// gamma[j], j = 0..k (endpoints ignored). Paths are built by sequential
// conditioning with early termination at the first violation. When
// with_bridge_weight is set (zero barrier only), each surviving path also
// accumulates prod_j (1 - exp(-4 X_{j-1} X_j)), the probability that the
// Brownian interpolation between grid points stays positive; its mean is an
// unbiased estimate of the continuum stay-positive probability.
ballot_estimate ballot_mc(int k, double r, double u, const std::vector<double>& gamma,
                          std::uint64_t N, rng_t& rng, bool with_bridge_weight = false);
ballot_estimate ballot_mc(int k, double r, double u, const barrier_profile& profile,
                          std::uint64_t N, rng_t& rng);
ballot_estimate ballot_mc(int k, double r, double u, double gamma_const, std::uint64_t N,
                          rng_t& rng, bool with_bridge_weight = false);

// Common-random-number variant: all barriers see identical paths, so pointwise
// barrier dominance gives exact estimate ordering.
std::vector<ballot_estimate> ballot_mc_multi(int k, double r, double u,
                                             const std::vector<std::vector<double>>& gammas,
                                             std::uint64_t N, rng_t& rng);

double reflection_formula(double k, double r, double u);          // 1 - exp(-4ru/k)
double ballot_asymptotic(double k, double r, double u);           // 4ru/k
double ballot_upper_bound(double k, double r, double u, double c);  // c(1+r)(1+u)/k

// Tabulated t -> P(restricted depth-k max <= m_tilde_k + t), linear
// interpolation inside the grid, 0 below it, and an analytic upper-tail
// extension 1 - c_tail * t * exp(-2 sqrt(log b) t) beyond the last point
// where the empirical curve is < 1 (clamped monotone to [0,1]).
struct cdf_curve {
    int k = 0;
    double m_tilde = 0.0;
    double sqrt_logb = 0.0;
    std::vector<double> tgrid;
    std::vector<double> p;
    std::vector<double> se;
    double t_star = 0.0;   // last grid point with p < 1
    double c_tail = 0.0;

    double eval(double t) const;
};

cdf_curve brw_max_cdf(int b, int k, const std::vector<double>& tgrid, int N, rng_t& rng);

// Reuse a simulated shape for deeper trees: same offset curve, new (k, m_tilde).
cdf_curve extend_curve(const cdf_curve& base, int k, double m_tilde);

struct q_mass_result {
    double estimate = 0.0;
    double se = 0.0;
};

// MC mass of the barrier-product measure: paths pinned from m_tilde_n + u
// (leaf end) to 0 (root end), each weighted by
// prod_{k=1..n} curve_k(m_tilde_n + s - m_tilde_k - X_k).
q_mass_result q_mass_mc(int n, double s, double u, const std::vector<cdf_curve>& curves, int N,
                        rng_t& rng);

}  // namespace treelocal
