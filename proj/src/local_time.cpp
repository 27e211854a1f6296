#include "treelocal/local_time.hpp"

#include <cmath>
#include <stdexcept>

namespace treelocal {

namespace {
constexpr double direct_threshold = 1e3;  // N-then-sum below, single Gamma above
}

double offspring_sample(double v, rng_t& rng) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::domain_error("offspring_sample: parent value must be finite and >= 0");
    if (v == 0.0) return 0.0;  // Poisson(0) == 0; no rng consumed
    std::poisson_distribution<long long> pois(v);
    long long N = pois(rng);
    if (N == 0) return 0.0;
    if (v <= direct_threshold) {
        std::exponential_distribution<double> exp1(1.0);
        double s = 0.0;
        for (long long i = 0; i < N; ++i) s += exp1(rng);
        return s;
    }
    std::gamma_distribution<double> gam(static_cast<double>(N), 1.0);
    return gam(rng);
}

local_time_field sample_root_field(const tree_shape& shape, double t, rng_t& rng) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error("sample_root_field: t must be finite and >= 0");
    local_time_field f{shape, field_origin::root, t, {}};
    f.values.assign(shape.vertex_count(), 0.0);
    f.values[0] = t;
    for (int l = 1; l <= shape.n; ++l) {
        std::int64_t off = shape.level_offset(l);
        std::int64_t poff = shape.level_offset(l - 1);
        std::int64_t sz = shape.level_size(l);
        for (std::int64_t j = 0; j < sz; ++j)
            f.values[off + j] = offspring_sample(f.values[poff + j / shape.b], rng);
    }
    return f;
}

local_time_field simulate_ctmc(const tree_shape& shape, const vertex_ref& start, ctmc_rule rule,
                               double t, rng_t& rng, ctmc_summary* summary) {
    std::int64_t start_idx = to_index(shape, start);
    int start_level = start.level();
    if (rule == ctmc_rule::first_hit_root && start_level == 0)
        throw std::domain_error("simulate_ctmc: first-hit-root requires start != root");
    if (rule == ctmc_rule::first_hit_leaves && start_level == shape.n)
        throw std::domain_error("simulate_ctmc: first-hit-leaves requires a non-leaf start");
    if (rule == ctmc_rule::accumulate_root && (!(t >= 0.0) || !std::isfinite(t)))
        throw std::domain_error("simulate_ctmc: accumulate rule needs finite t >= 0");

    local_time_field f{shape, field_origin::ctmc, rule == ctmc_rule::accumulate_root ? t : 0.0, {}};
    f.values.assign(shape.vertex_count(), 0.0);
    ctmc_summary sum;

    int lvl = start_level;
    std::int64_t pos = start_idx - shape.level_offset(lvl);
    std::exponential_distribution<double> exp1(1.0);

    auto stopped = [&]() {
        if (rule == ctmc_rule::first_hit_root) return lvl == 0;
        if (rule == ctmc_rule::first_hit_leaves) return lvl == shape.n;
        return false;
    };

    if (rule == ctmc_rule::accumulate_root && t == 0.0) {
        if (summary) *summary = sum;
        return f;  // root clock already at its target
    }

    while (true) {
        if (stopped()) {
            sum.first_hit_time = sum.elapsed;
            break;
        }
        std::int64_t vidx = shape.level_offset(lvl) + pos;
        int degree = (lvl == 0) ? shape.b : (lvl == shape.n ? 1 : shape.b + 1);
        double hold = exp1(rng) / degree;
        if (rule == ctmc_rule::accumulate_root && lvl == 0 && f.values[0] + hold >= t) {
            sum.elapsed += t - f.values[0];
            f.values[0] = t;  // truncated final sojourn
            break;
        }
        f.values[vidx] += hold;
        sum.elapsed += hold;
        // Uniform neighbor: slot 0 = parent for non-root, remaining = children.
        int slot = 0;
        if (degree > 1) {
            std::uniform_int_distribution<int> pick(0, degree - 1);
            slot = pick(rng);
        }
        if (lvl == 0) {
            pos = pos * shape.b + slot;
            ++lvl;
        } else if (slot == 0) {
            pos /= shape.b;
            --lvl;
        } else {
            pos = pos * shape.b + (slot - 1);
            ++lvl;
        }
        ++sum.jumps;
    }
    if (summary) *summary = sum;
    return f;
}

path_times sample_path_times(int n, rng_t& rng) {
    if (n < 1) throw std::domain_error("sample_path_times: n must be >= 1");
    path_times p;
    p.T.assign(n + 1, 0.0);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    double bx = 0.0, by = 0.0;
    for (int k = 1; k <= n; ++k) {
        bx += stdnorm(rng);
        by += stdnorm(rng);
        p.T[k] = 0.5 * (bx * bx + by * by);
    }
    return p;
}

local_time_field sample_leafstart_field(const tree_shape& shape, rng_t& rng) {
    local_time_field f{shape, field_origin::leafstart, 0.0, {}};
    f.values.assign(shape.vertex_count(), 0.0);
    path_times p = sample_path_times(shape.n, rng);
    // Path to the all-zero leaf is the leftmost vertex of every level.
    for (int k = 1; k <= shape.n; ++k) f.values[shape.level_offset(k)] = p.T[k];
    for (int l = 1; l <= shape.n; ++l) {
        std::int64_t off = shape.level_offset(l);
        std::int64_t poff = shape.level_offset(l - 1);
        std::int64_t sz = shape.level_size(l);
        for (std::int64_t j = 1; j < sz; ++j)  // j = 0 is the pinned path vertex
            f.values[off + j] = offspring_sample(f.values[poff + j / shape.b], rng);
    }
    return f;
}

}  // namespace treelocal
