#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace treelocal {

struct test_report {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;  // statistic <= threshold, set by make_report
    std::uint64_t n_a = 0;
    std::uint64_t n_b = 0;
    std::uint64_t seed = 0;
};

test_report make_report(const std::string& name, double statistic, double threshold,
                        std::uint64_t n_a, std::uint64_t n_b, std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov statistic (sup distance of empirical CDFs).
double ks_stat(std::vector<double> a, std::vector<double> b);
// One-sample variant against a reference CDF.
double ks_stat(std::vector<double> a, const std::function<double(double)>& cdf);

struct tail_fit {
    double slope_raw = 0.0;        // LS slope of log survival against u
    double slope_corrected = 0.0;  // LS slope of (log survival - log u) against u
    std::uint64_t exceedances = 0;  // samples above the window start
    int grid_points = 0;            // grid points with nonzero survival
};

// Log-survival regression over an evenly spaced grid of `points` levels on
// [u1, u2]. Grid points with zero survivors are dropped. The corrected slope
// removes a multiplicative-u prefactor from the survival model and requires
// u1 > 0.
tail_fit tail_slope(const std::vector<double>& samples, double u1, double u2, int points = 12);

// u -> mean_i exp(-kappa * masses[i] * exp(-2 u sqrt(log b))).
std::vector<double> laplace_mixture(const std::vector<double>& masses,
                                    const std::vector<double>& ugrid, double kappa, int b);

// Index of dispersion (sample variance / mean); 0 for constant counts.
double dispersion(const std::vector<double>& counts);

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);

struct cov_estimate {
    double value = 0.0;
    double se = 0.0;
};

// Sample covariance with a plug-in standard error from the spread of the
// centered products.
cov_estimate covariance(const std::vector<double>& x, const std::vector<double>& y);

double normal_cdf(double x);

// Upper-tail probability of a chi-square distribution with df degrees of
// freedom (regularized incomplete gamma Q(df/2, x/2)).
double chi2_sf(double x, int df);

// Pearson chi-square goodness-of-fit p-value for observed bin counts against
// expected counts (df = bins - 1 - fitted).
double chi2_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& expected,
                       int fitted = 0);

}  // namespace treelocal
