#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treelocal/rng.hpp"
#include "treelocal/tree.hpp"

namespace treelocal {

enum class field_origin { root, leafstart, ctmc };

struct local_time_field {
    tree_shape shape;
    field_origin origin;
    double t;  // root inverse-local-time parameter; 0 for leafstart/ctmc hit rules
    std::vector<double> values;  // per-vertex, level-major

    double at(std::int64_t vertex) const { return values[vertex]; }
    double leaf(std::int64_t leaf) const { return values[shape.leaf_vertex(leaf)]; }
};

// One parent->child step of the hierarchical chain: sum of a Poisson(v)
// number of unit-rate exponentials. Gamma(N,1) shortcut above the direct
// threshold keeps the cost O(1) for large v.
double offspring_sample(double v, rng_t& rng);

// Field rooted at value t, children sampled top-down independently.
local_time_field sample_root_field(const tree_shape& shape, double t, rng_t& rng);

enum class ctmc_rule { accumulate_root, first_hit_root, first_hit_leaves };

struct ctmc_summary {
    std::uint64_t jumps = 0;
    double elapsed = 0.0;       // total simulated time
    double first_hit_time = 0;  // hit time for the first-hit rules
};

// Event-driven walk: exponential holding at rate = degree, uniform neighbor
// jumps, local time accrued while resident. accumulate_root truncates the
// final root sojourn so the root's local time equals t exactly.
local_time_field simulate_ctmc(const tree_shape& shape, const vertex_ref& start, ctmc_rule rule,
                               double t, rng_t& rng, ctmc_summary* summary = nullptr);

struct path_times {
    std::vector<double> T;  // T[0] = 0
};

// T_k = |B_k|^2 / 2 for a standard 2D Gaussian walk B; marginal Exp(mean k).
path_times sample_path_times(int n, rng_t& rng);

// Walk started at the all-zero leaf and killed at the root: path local times
// from sample_path_times, off-path subtrees filled by independent cascades
// seeded at the path values, zero outside the path component.
local_time_field sample_leafstart_field(const tree_shape& shape, rng_t& rng);

}  // namespace treelocal
