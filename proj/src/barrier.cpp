#include "treelocal/barrier.hpp"

#include "treelocal/gff.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace treelocal {

bridge_path sample_bridge(int k, double r, double u, rng_t& rng) {
    if (k < 1) throw std::domain_error("sample_bridge: k must be >= 1");
    std::normal_distribution<double> step(0.0, std::sqrt(0.5));
    std::vector<double> W(static_cast<std::size_t>(k) + 1);
    W[0] = 0.0;
    for (int j = 1; j <= k; ++j) W[j] = W[j - 1] + step(rng);
    bridge_path out{k, r, u, std::vector<double>(static_cast<std::size_t>(k) + 1)};
    const double wk = W[k];
    for (int j = 0; j <= k; ++j) {
        const double f = static_cast<double>(j) / k;
        out.X[j] = r + f * (u - r) + W[j] - f * wk;
    }
    out.X[0] = r;  // endpoints pinned exactly, no float residue
    out.X[k] = u;
    return out;
}

barrier_profile::barrier_profile(int k_, double a_, double sigma_) : k(k_), a(a_), sigma(sigma_) {
    if (k < 1) throw std::domain_error("barrier_profile: k must be >= 1");
    if (!(a >= 0.0)) throw std::domain_error("barrier_profile: a must be >= 0");
    if (!(sigma > 0.0 && sigma < 0.1)) throw std::domain_error("barrier_profile: sigma must lie in (0, 0.1)");
}

double barrier_profile::operator()(int j) const {
    if (j < 0 || j > k) throw std::domain_error("barrier_profile: index out of range");
    const int m = std::min(j, k - j);
    return a + std::pow(static_cast<double>(m), sigma);
}

std::vector<double> barrier_profile::values() const {
    std::vector<double> g(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) g[j] = (*this)(j);
    return g;
}

namespace {

void check_gamma(int k, const std::vector<double>& gamma) {
    if (k < 1) throw std::domain_error("ballot_mc: k must be >= 1");
    if (gamma.size() != static_cast<std::size_t>(k) + 1)
        throw std::domain_error("ballot_mc: gamma must have k+1 entries");
}

}  // namespace

ballot_estimate ballot_mc(int k, double r, double u, const std::vector<double>& gamma,
                          std::uint64_t N, rng_t& rng, bool with_bridge_weight) {
    check_gamma(k, gamma);
    if (N < 1) throw std::domain_error("ballot_mc: N must be >= 1");
    if (with_bridge_weight) {
        for (int j = 1; j < k; ++j)
            if (gamma[j] != 0.0)
                throw std::domain_error("ballot_mc: bridge weight requires a zero barrier");
        if (!(r > 0.0 && u > 0.0))
            throw std::domain_error("ballot_mc: bridge weight requires positive endpoints");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uint64_t hits = 0;
    double sw = 0.0, sw2 = 0.0;
    for (std::uint64_t rep = 0; rep < N; ++rep) {
        double x = r;
        double w = 1.0;
        bool alive = true;
        for (int j = 1; j < k; ++j) {
            // One-step conditional law of the pinned walk given the current value.
            const double R = static_cast<double>(k - j + 1);
            const double mean = x + (u - x) / R;
            const double sd = std::sqrt(0.5 * (R - 1.0) / R);
            const double xj = mean + sd * gauss(rng);
            if (xj < gamma[j]) {
                alive = false;
                break;
            }
            if (with_bridge_weight) w *= -std::expm1(-4.0 * x * xj);
            x = xj;
        }
        if (alive) {
            ++hits;
            if (with_bridge_weight) {
                w *= -std::expm1(-4.0 * x * u);
                sw += w;
                sw2 += w * w;
            }
        }
    }
    ballot_estimate est;
    est.n = N;
    est.p = static_cast<double>(hits) / static_cast<double>(N);
    est.se = std::sqrt(est.p * (1.0 - est.p) / static_cast<double>(N));
    if (with_bridge_weight) {
        est.has_bridge = true;
        est.p_bridge = sw / static_cast<double>(N);
        if (N > 1) {
            const double var = (sw2 - sw * sw / static_cast<double>(N)) / static_cast<double>(N - 1);
            est.se_bridge = std::sqrt(std::max(var, 0.0) / static_cast<double>(N));
        }
    }
    return est;
}

ballot_estimate ballot_mc(int k, double r, double u, const barrier_profile& profile,
                          std::uint64_t N, rng_t& rng) {
    if (profile.k != k) throw std::domain_error("ballot_mc: profile length mismatch");
    return ballot_mc(k, r, u, profile.values(), N, rng, false);
}

ballot_estimate ballot_mc(int k, double r, double u, double gamma_const, std::uint64_t N,
                          rng_t& rng, bool with_bridge_weight) {
    return ballot_mc(k, r, u, std::vector<double>(static_cast<std::size_t>(k) + 1, gamma_const), N,
                     rng, with_bridge_weight);
}

std::vector<ballot_estimate> ballot_mc_multi(int k, double r, double u,
                                             const std::vector<std::vector<double>>& gammas,
                                             std::uint64_t N, rng_t& rng) {
    if (gammas.empty()) throw std::domain_error("ballot_mc_multi: no barriers");
    for (const auto& g : gammas) check_gamma(k, g);
    if (N < 1) throw std::domain_error("ballot_mc_multi: N must be >= 1");
    const std::size_t P = gammas.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::uint64_t> hits(P, 0);
    std::vector<char> alive(P);
    for (std::uint64_t rep = 0; rep < N; ++rep) {
        std::fill(alive.begin(), alive.end(), char(1));
        std::size_t nalive = P;
        double x = r;
        for (int j = 1; j < k && nalive > 0; ++j) {
            const double R = static_cast<double>(k - j + 1);
            const double mean = x + (u - x) / R;
            const double sd = std::sqrt(0.5 * (R - 1.0) / R);
            const double xj = mean + sd * gauss(rng);  // shared across barriers
            for (std::size_t p = 0; p < P; ++p) {
                if (alive[p] && xj < gammas[p][j]) {
                    alive[p] = 0;
                    --nalive;
                }
            }
            x = xj;
        }
        for (std::size_t p = 0; p < P; ++p) hits[p] += alive[p];
    }
    std::vector<ballot_estimate> out(P);
    for (std::size_t p = 0; p < P; ++p) {
        out[p].n = N;
        out[p].p = static_cast<double>(hits[p]) / static_cast<double>(N);
        out[p].se = std::sqrt(out[p].p * (1.0 - out[p].p) / static_cast<double>(N));
    }
    return out;
}

double reflection_formula(double k, double r, double u) {
    if (!(k > 0.0)) throw std::domain_error("reflection_formula: k must be > 0");
    if (r < 0.0 || u < 0.0) throw std::domain_error("reflection_formula: r, u must be >= 0");
    return -std::expm1(-4.0 * r * u / k);
}

double ballot_asymptotic(double k, double r, double u) {
    if (!(k >= 2.0)) throw std::domain_error("ballot_asymptotic: k must be >= 2");
    return 4.0 * r * u / k;
}

double ballot_upper_bound(double k, double r, double u, double c) {
    if (!(k >= 2.0)) throw std::domain_error("ballot_upper_bound: k must be >= 2");
    return c * (1.0 + r) * (1.0 + u) / k;
}

double cdf_curve::eval(double t) const {
    if (tgrid.empty()) throw std::logic_error("cdf_curve: empty grid");
    if (t < tgrid.front()) return 0.0;
    if (t >= tgrid.back()) return 1.0;
    const auto it = std::upper_bound(tgrid.begin(), tgrid.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - tgrid.begin());
    const double w = (t - tgrid[i - 1]) / (tgrid[i] - tgrid[i - 1]);
    const double v = p[i - 1] + w * (p[i] - p[i - 1]);
    return std::clamp(v, 0.0, 1.0);
}

cdf_curve brw_max_cdf(int b, int k, const std::vector<double>& tgrid, int N, rng_t& rng) {
    if (b < 2) throw std::domain_error("brw_max_cdf: b must be >= 2");
    if (k < 1 || k > 16) throw std::domain_error("brw_max_cdf: k must lie in [1, 16]");
    if (N < 2) throw std::domain_error("brw_max_cdf: N must be >= 2");
    if (tgrid.empty()) throw std::domain_error("brw_max_cdf: empty grid");
    for (std::size_t i = 1; i < tgrid.size(); ++i)
        if (!(tgrid[i] > tgrid[i - 1])) throw std::domain_error("brw_max_cdf: grid must increase");

    std::vector<double> samples = brw_max_samples(b, k, true, N, rng);
    std::sort(samples.begin(), samples.end());
    const centering_constants cc = centering(b, k);

    cdf_curve curve;
    curve.k = k;
    curve.m_tilde = cc.m_tilde;
    curve.sqrt_logb = std::sqrt(std::log(static_cast<double>(b)));
    curve.tgrid = tgrid;
    curve.p.resize(tgrid.size());
    curve.se.resize(tgrid.size());
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        const double cut = cc.m_tilde + tgrid[i];
        const auto cnt = std::upper_bound(samples.begin(), samples.end(), cut) - samples.begin();
        curve.p[i] = static_cast<double>(cnt) / static_cast<double>(N);
        curve.se[i] = std::sqrt(curve.p[i] * (1.0 - curve.p[i]) / static_cast<double>(N));
    }
    for (std::size_t i = 1; i < curve.p.size(); ++i)
        curve.p[i] = std::max(curve.p[i], curve.p[i - 1]);

    // Analytic upper-tail extension beyond the last empirically resolved point:
    // 1 - c_tail * t * exp(-2 sqrt(log b) t), matched continuously at t_star.
    std::size_t istar = curve.p.size();
    for (std::size_t i = curve.p.size(); i-- > 0;) {
        if (curve.p[i] < 1.0) {
            istar = i;
            break;
        }
    }
    if (istar < curve.p.size() && tgrid[istar] > 0.0) {
        curve.t_star = tgrid[istar];
        curve.c_tail = (1.0 - curve.p[istar]) * std::exp(2.0 * curve.sqrt_logb * curve.t_star) /
                       curve.t_star;
        for (std::size_t i = istar + 1; i < curve.p.size(); ++i) {
            const double t = tgrid[i];
            const double tail = 1.0 - curve.c_tail * t * std::exp(-2.0 * curve.sqrt_logb * t);
            curve.p[i] = std::clamp(tail, curve.p[i - 1], 1.0);
        }
    } else {
        curve.t_star = tgrid.back();
        curve.c_tail = 0.0;
    }
    return curve;
}

cdf_curve extend_curve(const cdf_curve& base, int k, double m_tilde) {
    if (k < 1) throw std::domain_error("extend_curve: k must be >= 1");
    cdf_curve out = base;
    out.k = k;
    out.m_tilde = m_tilde;
    return out;
}

q_mass_result q_mass_mc(int n, double s, double u, const std::vector<cdf_curve>& curves, int N,
                        rng_t& rng) {
    if (n < 1) throw std::domain_error("q_mass_mc: n must be >= 1");
    if (s < u) throw std::domain_error("q_mass_mc: requires s >= u");
    if (static_cast<int>(curves.size()) < n)
        throw std::domain_error("q_mass_mc: curves required for every depth up to n");
    if (N < 2) throw std::domain_error("q_mass_mc: N must be >= 2");
    const double m_n = curves[static_cast<std::size_t>(n) - 1].m_tilde;
    double sum = 0.0, sum2 = 0.0;
    for (int rep = 0; rep < N; ++rep) {
        const bridge_path path = sample_bridge(n, m_n + u, 0.0, rng);
        double f = 1.0;
        for (int k = 1; k <= n; ++k) {
            const cdf_curve& c = curves[static_cast<std::size_t>(k) - 1];
            f *= c.eval(m_n + s - c.m_tilde - path.X[k]);
            if (f == 0.0) break;
        }
        sum += f;
        sum2 += f * f;
    }
    q_mass_result out;
    out.estimate = sum / N;
    const double var = (sum2 - sum * sum / N) / (N - 1);
    out.se = std::sqrt(std::max(var, 0.0) / N);
    return out;
}

}  // namespace treelocal
