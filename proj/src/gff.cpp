#include "treelocal/gff.hpp"

#include <cmath>
#include <stdexcept>

namespace treelocal {

gaussian_field sample_gff(const tree_shape& shape, rng_t& rng) {
    gaussian_field f{shape, {}};
    f.values.assign(shape.vertex_count(), 0.0);
    std::normal_distribution<double> edge(0.0, std::sqrt(0.5));
    for (int l = 1; l <= shape.n; ++l) {
        std::int64_t off = shape.level_offset(l);
        std::int64_t poff = shape.level_offset(l - 1);
        std::int64_t sz = shape.level_size(l);
        for (std::int64_t j = 0; j < sz; ++j)
            f.values[off + j] = f.values[poff + j / shape.b] + edge(rng);
    }
    return f;
}

centering_constants centering(int b, int n) {
    if (b < 2 || n < 1) throw std::domain_error("centering: need b >= 2, n >= 1");
    centering_constants c;
    c.b = b;
    c.n = n;
    double slb = std::sqrt(std::log(static_cast<double>(b)));
    double ln = std::log(static_cast<double>(n));
    c.m_n = slb * n - ln / slb;
    c.m_tilde = slb * n - 3.0 / (4.0 * slb) * ln;
    return c;
}

centering_constants centering(int b, int n, double t) {
    centering_constants c = centering(b, n);
    if (!(t > 0.0)) throw std::domain_error("centering: a_n(t) needs t > 0");
    double slb = std::sqrt(std::log(static_cast<double>(b)));
    double st = std::sqrt(t);
    c.t = t;
    c.has_a = true;
    c.a_n = c.m_tilde - 1.0 / (4.0 * slb) * std::log((n + st) / st);
    return c;
}

// Level-by-level evolution; only two level arrays live at a time, so depth-20
// fields fit comfortably.
brw_max_pair sample_brw_max_pair(int b, int k, rng_t& rng) {
    if (k < 1) throw std::domain_error("brw_max: k must be >= 1");
    std::normal_distribution<double> edge(0.0, std::sqrt(0.5));
    std::vector<double> cur{0.0}, next;
    for (int l = 1; l <= k; ++l) {
        next.assign(cur.size() * b, 0.0);
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] = cur[j / b] + edge(rng);
        cur.swap(next);
    }
    brw_max_pair out{cur[0], 0.0};
    std::size_t first_restricted = cur.size() / b;  // theta >= 1/b iff leading digit >= 1
    out.m_restricted = cur[first_restricted];
    for (std::size_t j = 0; j < cur.size(); ++j) {
        if (cur[j] > out.m_full) out.m_full = cur[j];
        if (j >= first_restricted && cur[j] > out.m_restricted) out.m_restricted = cur[j];
    }
    return out;
}

std::vector<double> brw_max_samples(int b, int k, bool restrict_half, int replicas, rng_t& rng) {
    std::vector<double> out;
    out.reserve(replicas);
    for (int i = 0; i < replicas; ++i) {
        brw_max_pair p = sample_brw_max_pair(b, k, rng);
        out.push_back(restrict_half ? p.m_restricted : p.m_full);
    }
    return out;
}

}  // namespace treelocal
