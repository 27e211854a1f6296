#include "treelocal/isomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treelocal {

namespace {
constexpr double value_clamp = 1e-300;

inline double logsumexp2(double a, double b) {
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log edge weight for phi_{1/2}(d) up to the shared normalizer: -d^2.
inline double edge_logw(double child_signed, double parent_signed) {
    double d = child_signed - parent_signed;
    return -d * d;
}
}  // namespace

subtree_topology::subtree_topology(int b_, int depth_) : b(b_), depth(depth_) {
    if (b < 2 || depth < 0) throw std::domain_error("subtree_topology: need b >= 2, depth >= 0");
    level_off.assign(depth + 2, 0);
    std::int64_t p = 1;
    for (int d = 0; d <= depth; ++d) {
        level_off[d + 1] = level_off[d] + p;
        p *= b;
    }
    parent.assign(level_off[depth + 1], -1);
    for (int d = 1; d <= depth; ++d) {
        std::int64_t off = level_off[d], poff = level_off[d - 1];
        for (std::int64_t j = 0; j < level_off[d + 1] - off; ++j)
            parent[off + j] = poff + j / b;
    }
}

sign_config sample_signs(const subtree_topology& topo, const std::vector<double>& y,
                         double rootvalue, rng_t& rng) {
    std::int64_t m = topo.vertex_count();
    if (static_cast<std::int64_t>(y.size()) != m)
        throw std::domain_error("sample_signs: y size mismatch");
    for (double v : y)
        if (!(v >= 0.0)) throw std::domain_error("sample_signs: y must be nonnegative");
    if (y[0] != rootvalue) throw std::domain_error("sample_signs: y[0] must equal rootvalue");

    // up[i][s]: log of the subtree-below-i partial sum as a function of the
    // parent's signed value, s = 0 for sigma_p = -1, s = 1 for +1.
    std::vector<std::array<double, 2>> up(m, {0.0, 0.0});
    std::vector<std::array<double, 2>> childsum(m, {0.0, 0.0});  // sum of up over children, by own sign
    for (std::int64_t i = m - 1; i >= 1; --i) {
        double yp = y[topo.parent[i]];
        for (int s = 0; s < 2; ++s) {
            double sp = (s == 0 ? -yp : yp);
            double wminus = edge_logw(-y[i], sp) + childsum[i][0];
            double wplus = edge_logw(y[i], sp) + childsum[i][1];
            up[i][s] = logsumexp2(wminus, wplus);
        }
        std::int64_t p = topo.parent[i];
        childsum[p][0] += up[i][0];
        childsum[p][1] += up[i][1];
    }

    sign_config cfg;
    cfg.sigma.assign(m, +1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::int64_t i = 1; i < m; ++i) {
        if (y[i] == 0.0) {
            cfg.sigma[i] = +1;  // degenerate vertex: weight is sign-free
            continue;
        }
        std::int64_t p = topo.parent[i];
        double sp = cfg.sigma[p] * y[p];
        double gminus = edge_logw(-y[i], sp) + childsum[i][0];
        double gplus = edge_logw(y[i], sp) + childsum[i][1];
        double pplus = 1.0 / (1.0 + std::exp(gminus - gplus));
        cfg.sigma[i] = (unif(rng) < pplus) ? +1 : -1;
    }
    return cfg;
}

std::vector<double> enumerate_sign_law(const subtree_topology& topo, const std::vector<double>& y,
                                       double rootvalue) {
    std::int64_t m = topo.vertex_count();
    if (m > 16) throw std::length_error("enumerate_sign_law: more than 16 vertices");
    if (static_cast<std::int64_t>(y.size()) != m)
        throw std::domain_error("enumerate_sign_law: y size mismatch");
    if (y[0] != rootvalue) throw std::domain_error("enumerate_sign_law: y[0] must equal rootvalue");

    std::int64_t configs = std::int64_t(1) << (m - 1);
    std::vector<double> logw(configs);
    double maxlw = -1e300;
    for (std::int64_t mask = 0; mask < configs; ++mask) {
        double lw = 0.0;
        bool valid = true;
        for (std::int64_t i = 1; i < m; ++i) {
            bool plus = (mask >> (i - 1)) & 1;
            if (y[i] == 0.0 && !plus) {
                valid = false;  // degenerate vertices carry their mass on +1
                break;
            }
            double si = plus ? y[i] : -y[i];
            std::int64_t p = topo.parent[i];
            double sp = (p == 0) ? y[0] : (((mask >> (p - 1)) & 1) ? y[p] : -y[p]);
            lw += edge_logw(si, sp);
        }
        logw[mask] = valid ? lw : -1e300;
        if (valid) maxlw = std::max(maxlw, lw);
    }
    double total = 0.0;
    for (auto& w : logw) {
        w = std::exp(w - maxlw);
        total += w;
    }
    for (auto& w : logw) w /= total;
    return logw;
}

coupled_triple couple(const local_time_field& L, const gaussian_field& h, int k, rng_t& rng) {
    const tree_shape& shape = L.shape;
    if (h.shape.b != shape.b || h.shape.n != shape.n)
        throw std::domain_error("couple: field shapes differ");
    if (k < 1 || k > shape.n) throw std::domain_error("couple: need 1 <= k <= n");

    coupled_triple out{L, h, h, k};
    subtree_topology topo(shape.b, k);
    std::int64_t m = topo.vertex_count();
    std::vector<double> y(m);

    int zl = shape.n - k;
    std::int64_t zcount = shape.level_size(zl);
    for (std::int64_t zpos = 0; zpos < zcount; ++zpos) {
        std::int64_t z = shape.level_offset(zl) + zpos;
        double hz = h.values[z];
        double rootval = std::sqrt(L.values[z]);
        y[0] = rootval;
        for (int d = 1; d <= k; ++d) {
            std::int64_t goff = shape.level_offset(zl + d);
            std::int64_t gbase = zpos * shape.pow_b(d);
            std::int64_t loff = topo.level_off[d];
            std::int64_t lsz = topo.level_off[d + 1] - loff;
            for (std::int64_t q = 0; q < lsz; ++q) {
                std::int64_t g = goff + gbase + q;
                double dh = h.values[g] - hz;
                double v = std::sqrt(L.values[g] + dh * dh);
                y[loff + q] = (v < value_clamp) ? 0.0 : v;
            }
        }
        sign_config cfg = sample_signs(topo, y, rootval, rng);
        double base = hz - rootval;
        for (int d = 1; d <= k; ++d) {
            std::int64_t goff = shape.level_offset(zl + d);
            std::int64_t gbase = zpos * shape.pow_b(d);
            std::int64_t loff = topo.level_off[d];
            std::int64_t lsz = topo.level_off[d + 1] - loff;
            for (std::int64_t q = 0; q < lsz; ++q)
                out.h_tilde.values[goff + gbase + q] = base + cfg.sigma[loff + q] * y[loff + q];
        }
    }
    return out;
}

double coupling_residual(const coupled_triple& c) {
    const tree_shape& shape = c.L.shape;
    int zl = shape.n - c.k;
    double worst = 0.0;
    for (int l = zl + 1; l <= shape.n; ++l) {
        std::int64_t off = shape.level_offset(l);
        std::int64_t sz = shape.level_size(l);
        std::int64_t zoff = shape.level_offset(zl);
        std::int64_t shrink = shape.pow_b(l - zl);
        for (std::int64_t j = 0; j < sz; ++j) {
            std::int64_t x = off + j;
            std::int64_t z = zoff + j / shrink;
            double dh = c.h.values[x] - c.h.values[z];
            double lhs = c.L.values[x] + dh * dh;
            double rt = c.h_tilde.values[x] - c.h_tilde.values[z] + std::sqrt(c.L.values[z]);
            double rhs = rt * rt;
            double denom = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            worst = std::max(worst, std::abs(lhs - rhs) / denom);
        }
    }
    return worst;
}

}  // namespace treelocal
