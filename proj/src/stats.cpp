#include "treelocal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace treelocal {

test_report make_report(const std::string& name, double statistic, double threshold,
                        std::uint64_t n_a, std::uint64_t n_b, std::uint64_t seed) {
    test_report r;
    r.name = name;
    r.statistic = statistic;
    r.threshold = threshold;
    r.pass = statistic <= threshold;
    r.n_a = n_a;
    r.n_b = n_b;
    r.seed = seed;
    return r;
}

double ks_stat(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_stat: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < na && j < nb) {
        const double v = std::min(a[i], b[j]);
        while (i < na && a[i] == v) ++i;
        while (j < nb && b[j] == v) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(na);
        const double fb = static_cast<double>(j) / static_cast<double>(nb);
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

double ks_stat(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw std::domain_error("ks_stat: empty sample");
    std::sort(a.begin(), a.end());
    const std::size_t n = a.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(a[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
    }
    return d;
}

namespace {

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::domain_error("ls_slope: degenerate abscissa");
    return sxy / sxx;
}

}  // namespace

tail_fit tail_slope(const std::vector<double>& samples, double u1, double u2, int points) {
    if (samples.empty()) throw std::domain_error("tail_slope: empty sample");
    if (!(u2 > u1)) throw std::domain_error("tail_slope: window must satisfy u2 > u1");
    if (points < 3) throw std::domain_error("tail_slope: need at least 3 grid points");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double N = static_cast<double>(sorted.size());

    const auto survival = [&](double u) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), u);
        return static_cast<double>(sorted.end() - it) / N;
    };

    tail_fit fit;
    fit.exceedances = static_cast<std::uint64_t>(std::llround(survival(u1) * N));
    if (fit.exceedances < 100) throw std::length_error("tail_slope: fewer than 100 exceedances");

    std::vector<double> us, logs;
    for (int i = 0; i < points; ++i) {
        const double u = u1 + (u2 - u1) * static_cast<double>(i) / (points - 1);
        const double s = survival(u);
        if (s <= 0.0) continue;
        us.push_back(u);
        logs.push_back(std::log(s));
    }
    if (us.size() < 3) throw std::length_error("tail_slope: window too sparse");
    fit.grid_points = static_cast<int>(us.size());
    fit.slope_raw = ls_slope(us, logs);
    if (us.front() > 0.0) {
        std::vector<double> corrected(logs);
        for (std::size_t i = 0; i < us.size(); ++i) corrected[i] -= std::log(us[i]);
        fit.slope_corrected = ls_slope(us, corrected);
    } else {
        fit.slope_corrected = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

std::vector<double> laplace_mixture(const std::vector<double>& masses,
                                    const std::vector<double>& ugrid, double kappa, int b) {
    if (!(kappa > 0.0)) throw std::domain_error("laplace_mixture: kappa must be > 0");
    if (b < 2) throw std::domain_error("laplace_mixture: b must be >= 2");
    if (masses.empty()) throw std::domain_error("laplace_mixture: empty masses");
    for (double m : masses)
        if (!(m >= 0.0)) throw std::domain_error("laplace_mixture: masses must be >= 0");
    const double slb = std::sqrt(std::log(static_cast<double>(b)));
    std::vector<double> out(ugrid.size());
    for (std::size_t j = 0; j < ugrid.size(); ++j) {
        const double rate = kappa * std::exp(-2.0 * ugrid[j] * slb);
        double acc = 0.0;
        for (double m : masses) acc += std::exp(-rate * m);
        out[j] = acc / static_cast<double>(masses.size());
    }
    return out;
}

double dispersion(const std::vector<double>& counts) {
    if (counts.size() < 2) throw std::domain_error("dispersion: need at least 2 cells");
    const double m = mean(counts);
    const double v = sample_variance(counts);
    if (v == 0.0) return 0.0;
    return v / m;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::domain_error("sample_variance: need at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

cov_estimate covariance(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::domain_error("covariance: size mismatch");
    if (x.size() < 2) throw std::domain_error("covariance: need at least 2 pairs");
    const double mx = mean(x), my = mean(y);
    const std::size_t n = x.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (x[i] - mx) * (y[i] - my);
    cov_estimate out;
    double s = 0.0;
    for (double v : w) s += v;
    out.value = s / static_cast<double>(n - 1);
    out.se = std::sqrt(sample_variance(w) / static_cast<double>(n));
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Regularized incomplete gamma Q(a, x), series for x < a+1 and Lentz
// continued fraction otherwise.
double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: invalid arguments");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - lg);
}

}  // namespace

double chi2_sf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_sf: df must be >= 1");
    if (x < 0.0) throw std::domain_error("chi2_sf: x must be >= 0");
    return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& expected,
                       int fitted) {
    if (observed.size() != expected.size())
        throw std::domain_error("chi2_gof_pvalue: size mismatch");
    if (observed.size() < 2) throw std::domain_error("chi2_gof_pvalue: need at least 2 bins");
    double stat = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::domain_error("chi2_gof_pvalue: nonpositive expectation");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
        ++bins;
    }
    const int df = bins - 1 - fitted;
    if (df < 1) throw std::domain_error("chi2_gof_pvalue: no degrees of freedom");
    return chi2_sf(stat, df);
}

}  // namespace treelocal
