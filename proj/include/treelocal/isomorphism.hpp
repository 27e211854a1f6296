#pragma once

#include <cstdint>
#include <vector>

#include "treelocal/gff.hpp"
#include "treelocal/local_time.hpp"
#include "treelocal/rng.hpp"
#include "treelocal/tree.hpp"

namespace treelocal {

// Rooted depth-k b-ary subtree in local level-major indexing; vertex 0 is the
// subtree root.
struct subtree_topology {
    int b;
    int depth;
    std::vector<std::int64_t> level_off;  // size depth+2
    std::vector<std::int64_t> parent;     // parent[0] = -1

    subtree_topology(int b_, int depth_);
    std::int64_t vertex_count() const { return static_cast<std::int64_t>(parent.size()); }
};

struct sign_config {
    std::vector<std::int8_t> sigma;  // +1/-1 per subtree vertex; sigma[0] = +1
};

// Exact draw from the sign law with density proportional to
// prod over edges (p,x) of phi_{1/2}(sigma_x y_x - sigma_p y_p),
// root sign pinned to +1. Two passes: upward log-sum-exp aggregation,
// downward conditional sampling. Vertices with y = 0 take +1 without
// consuming randomness (both signs give the same configuration weight).
sign_config sample_signs(const subtree_topology& topo, const std::vector<double>& y,
                         double rootvalue, rng_t& rng);

// Exhaustive reference for subtrees with <= 16 vertices: probability of each
// sign pattern, indexed by bitmask over non-root vertices (bit i-1 set means
// sigma_i = +1).
std::vector<double> enumerate_sign_law(const subtree_topology& topo, const std::vector<double>& y,
                                       double rootvalue);

struct coupled_triple {
    local_time_field L;
    gaussian_field h;
    gaussian_field h_tilde;
    int k;
};

// From an independent pair (L, h), build h_tilde agreeing with h above level
// n-k and satisfying L(x) + (h(x)-h(z))^2 = (h_tilde(x)-h_tilde(z)+sqrt(L(z)))^2
// within each depth-k subtree rooted at a level-(n-k) vertex z.
coupled_triple couple(const local_time_field& L, const gaussian_field& h, int k, rng_t& rng);

// Largest mixed abs/relative residual of the identity above, over all vertices
// below level n-k: |lhs-rhs| / max(1, |lhs|, |rhs|).
double coupling_residual(const coupled_triple& c);

}  // namespace treelocal
