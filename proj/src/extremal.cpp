#include "treelocal/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treelocal {

std::vector<std::int64_t> level_set(const std::vector<double>& leafvalues, double threshold) {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(leafvalues.size()); ++i)
        if (leafvalues[i] >= threshold) out.push_back(i);
    return out;
}

bool is_k_local_max(const tree_shape& shape, const std::vector<double>& leafvalues,
                    std::int64_t leaf, int k) {
    if (k < 0 || k > shape.n) throw std::domain_error("is_k_local_max: k out of range");
    std::int64_t first = ball_first_leaf(shape, leaf, k);
    double v = leafvalues[leaf];
    for (std::int64_t j = first; j < first + shape.pow_b(k); ++j)
        if (leafvalues[j] > v) return false;
    return true;
}

double default_floor(int n) { return -(5.0 + std::log(static_cast<double>(n))); }

extremal_sample extract_structured(const tree_shape& shape, const std::vector<double>& leafvalues,
                                   int k, double centering, double floor_height, std::int64_t r) {
    if (k < 0 || k > shape.n) throw std::domain_error("extract_structured: k out of range");
    if (r < 1 || r > shape.leaf_count())
        throw std::domain_error("extract_structured: profile length out of range");
    extremal_sample out{shape.b, shape.n, k, r, centering, {}};
    std::int64_t bk = shape.pow_b(k);
    std::int64_t nballs = shape.leaf_count() / bk;
    for (std::int64_t ball = 0; ball < nballs; ++ball) {
        std::int64_t first = ball * bk;
        // Scan the ball once; the smallest-index argmax is the candidate, and
        // any tie elsewhere still qualifies as a local max, so emit each
        // tied leaf (distinct thetas keep points distinct).
        double vmax = leafvalues[first];
        for (std::int64_t j = first + 1; j < first + bk; ++j) vmax = std::max(vmax, leafvalues[j]);
        if (vmax - centering < floor_height) continue;
        for (std::int64_t x = first; x < first + bk; ++x) {
            if (leafvalues[x] != vmax) continue;
            extremal_point pt;
            pt.leaf = x;
            pt.theta = theta_of_leaf(shape, x);
            pt.height = vmax - centering;
            pt.profile.resize(r);
            for (std::int64_t j = 0; j < r; ++j)
                pt.profile[j] = vmax - leafvalues[canopy_leaf(shape, x, j)];
            out.points.push_back(std::move(pt));
        }
    }
    return out;
}

weighted_measure intensity_estimate(const local_time_field& field, intensity_mode mode, int k,
                                    double C) {
    if (!(C > 0.0)) throw std::domain_error("intensity_estimate: C must be > 0");
    const tree_shape& shape = field.shape;
    if (mode == intensity_mode::leafstart && field.origin == field_origin::root)
        throw std::domain_error("intensity_estimate: leafstart mode needs a leaf-started field");
    if (mode == intensity_mode::root && field.origin == field_origin::leafstart)
        throw std::domain_error("intensity_estimate: root mode needs a root-started field");

    double logb = std::log(static_cast<double>(shape.b));
    double slb = std::sqrt(logb);
    weighted_measure out;
    if (mode == intensity_mode::subtree) {
        if (k < 1 || k > shape.n) throw std::domain_error("intensity_estimate: k out of range");
        double scale = C * std::pow(static_cast<double>(shape.b), -2.0 * k);
        std::int64_t off = shape.level_offset(k);
        std::int64_t sz = shape.level_size(k);
        for (std::int64_t j = 0; j < sz; ++j) {
            double v = field.values[off + j];
            double v1 = std::max(v, 1.0);
            double lead = slb * k - std::sqrt(v) - std::log(v1) / (8.0 * slb);
            if (lead <= 0.0) continue;
            double mass = scale * lead * std::pow(v1, 0.25) * std::exp(2.0 * slb * std::sqrt(v));
            if (mass <= 0.0) continue;
            out.atoms.emplace_back(static_cast<double>(j) / sz, mass);
            out.total += mass;
        }
        return out;
    }
    double scale = C * std::pow(static_cast<double>(shape.b), -2.0 * shape.n);
    std::int64_t nl = shape.leaf_count();
    for (std::int64_t leaf = 0; leaf < nl; ++leaf) {
        double v = field.leaf(leaf);
        if (v <= 0.0) continue;
        double lead = slb * shape.n - std::sqrt(v);
        if (lead <= 0.0) continue;
        double mass = scale * lead * std::pow(v, 0.25) * std::exp(2.0 * slb * std::sqrt(v));
        out.atoms.emplace_back(theta_of_leaf(shape, leaf), mass);
        out.total += mass;
    }
    return out;
}

maximizer_loc maximizer_location(const tree_shape& shape, const std::vector<double>& leafvalues,
                                 bool is_local_time) {
    if (leafvalues.empty()) throw std::domain_error("maximizer_location: empty input");
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < static_cast<std::int64_t>(leafvalues.size()); ++j)
        if (leafvalues[j] > leafvalues[best]) best = j;  // strict keeps smallest-theta tie
    if (is_local_time && !(leafvalues[best] > 0.0))
        throw std::domain_error("maximizer_location: all-zero local-time field has no maximizer");
    maximizer_loc loc;
    loc.theta = theta_of_leaf(shape, best);
    if (best == 0) return loc;  // theta == 0 sits below every dyadic scale
    // theta in [b^{-j-1}, b^{-j})  <=>  b^{n-j-1} <= leaf < b^{n-j}; integer
    // arithmetic avoids float fuzz at exact powers.
    int e = 0;
    std::int64_t p = 1;
    while (p * shape.b <= best) {
        p *= shape.b;
        ++e;
    }
    loc.scale = shape.n - 1 - e;
    loc.has_scale = true;
    return loc;
}

double gap_statistic(const tree_shape& shape, const std::vector<double>& leafvalues,
                     std::int64_t leaf, int k) {
    if (k < 1 || k > shape.n) throw std::domain_error("gap_statistic: k must be >= 1");
    std::int64_t first = ball_first_leaf(shape, leaf, k);
    double m1 = -1e300, m2 = -1e300;
    for (std::int64_t j = first; j < first + shape.pow_b(k); ++j) {
        double v = leafvalues[j];
        if (v > m1) {
            m2 = m1;
            m1 = v;
        } else if (v > m2) {
            m2 = v;
        }
    }
    return m1 - m2;
}

}  // namespace treelocal
