#pragma once

#include <cstdint>
#include <vector>

#include "treelocal/rng.hpp"
#include "treelocal/tree.hpp"

namespace treelocal {

struct gaussian_field {
    tree_shape shape;
    std::vector<double> values;  // per-vertex, level-major; value at root is 0

    double at(std::int64_t vertex) const { return values[vertex]; }
    double leaf(std::int64_t leaf) const { return values[shape.leaf_vertex(leaf)]; }
};

// Zero at the root, independent Normal(0, 1/2) edge increments.
gaussian_field sample_gff(const tree_shape& shape, rng_t& rng);

struct centering_constants {
    int b;
    int n;
    double t = 0.0;
    bool has_a = false;
    double m_n;       // sqrt(log b) n - log n / sqrt(log b)
    double a_n = 0;   // root-started max centering at inverse local time t
    double m_tilde;   // BRW max centering
};

centering_constants centering(int b, int n);
centering_constants centering(int b, int n, double t);

// Max of the depth-k field over all leaves (restrict = false) or over leaves
// with theta >= 1/b (restrict = true). Samples are i.i.d. across replicas.
std::vector<double> brw_max_samples(int b, int k, bool restrict_half, int replicas, rng_t& rng);

struct brw_max_pair {
    double m_full;
    double m_restricted;  // <= m_full on the same replica
};

brw_max_pair sample_brw_max_pair(int b, int k, rng_t& rng);

}  // namespace treelocal
