#pragma once

#include <cstdint>
#include <vector>

namespace treelocal {

// Regular rooted b-ary tree of depth n. Vertices are stored level-major:
// index 0 is the root, level l occupies [level_offset(l), level_offset(l+1)),
// lexicographic digit order within a level. Leaf j (0 <= j < b^n) is the
// vertex at level n with within-level index j.
struct tree_shape {
    int b;
    int n;

    tree_shape(int b_, int n_);

    std::int64_t pow_b(int k) const { return powers[k]; }
    std::int64_t leaf_count() const { return powers[n]; }
    std::int64_t vertex_count() const { return offsets[n + 1]; }
    std::int64_t level_offset(int level) const { return offsets[level]; }
    std::int64_t level_size(int level) const { return powers[level]; }

    int level_of(std::int64_t v) const;
    // Within-level index of vertex v.
    std::int64_t pos_of(std::int64_t v) const { return v - offsets[level_of(v)]; }

    std::int64_t parent(std::int64_t v) const;
    std::int64_t child(std::int64_t v, int c) const;
    std::int64_t leaf_vertex(std::int64_t leaf) const { return offsets[n] + leaf; }

  private:
    std::vector<std::int64_t> powers;   // b^0..b^n
    std::vector<std::int64_t> offsets;  // level start indices, plus total at [n+1]
};

// Digit-path vertex reference; empty digits = root. digits[i] in {0..b-1}.
struct vertex_ref {
    std::vector<int> digits;
    int level() const { return static_cast<int>(digits.size()); }
};

vertex_ref make_ref(std::initializer_list<int> digits);

// Conversions between digit form and flat (level, within-level index) form.
vertex_ref to_ref(const tree_shape& shape, std::int64_t vertex);
std::int64_t to_index(const tree_shape& shape, const vertex_ref& x);
std::int64_t leaf_of(const tree_shape& shape, const vertex_ref& x);  // requires level == n

// theta(x) = sum_i b^{-i} x_i, injective over depth-n leaves.
double theta(const vertex_ref& x, const tree_shape& shape);
double theta_of_leaf(const tree_shape& shape, std::int64_t leaf);

vertex_ref ancestor(const vertex_ref& x, int k);

// Leaves of the subtree rooted at the k-th ancestor of leaf x; |B_k| = b^k.
std::vector<vertex_ref> ball_leaves(const vertex_ref& x, int k, const tree_shape& shape);
std::int64_t ball_first_leaf(const tree_shape& shape, std::int64_t leaf, int k);

// Canopy enumeration around leaf x: digitwise (y_k - x_k) mod b read as a
// base-b number, most significant digit nearest the root. Bijection onto
// {0..b^n-1} with canopy_index(x,x) = 0 and y in B_k(x) iff index < b^k.
std::int64_t canopy_index(const vertex_ref& x, const vertex_ref& y, const tree_shape& shape);
std::int64_t canopy_index_leaf(const tree_shape& shape, std::int64_t xleaf, std::int64_t yleaf);
// Inverse map: the leaf y with canopy_index(x, y) = j.
std::int64_t canopy_leaf(const tree_shape& shape, std::int64_t xleaf, std::int64_t j);

// Ball distance: smallest k with y in B_k(x); equals n minus the number of
// leading digits x and y share.
int ball_distance(const tree_shape& shape, std::int64_t xleaf, std::int64_t yleaf);

}  // namespace treelocal
