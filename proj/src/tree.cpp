#include "treelocal/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace treelocal {

tree_shape::tree_shape(int b_, int n_) : b(b_), n(n_) {
    if (b < 2) throw std::domain_error("tree_shape: branching factor must be >= 2");
    if (n < 1) throw std::domain_error("tree_shape: depth must be >= 1");
    powers.resize(n + 1);
    powers[0] = 1;
    for (int k = 1; k <= n; ++k) powers[k] = powers[k - 1] * b;
    offsets.resize(n + 2);
    offsets[0] = 0;
    for (int l = 0; l <= n; ++l) offsets[l + 1] = offsets[l] + powers[l];
}

int tree_shape::level_of(std::int64_t v) const {
    if (v < 0 || v >= vertex_count()) throw std::domain_error("level_of: vertex out of range");
    int l = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), v) - offsets.begin());
    return l - 1;
}

std::int64_t tree_shape::parent(std::int64_t v) const {
    int l = level_of(v);
    if (l == 0) throw std::domain_error("parent: root has no parent");
    return offsets[l - 1] + (v - offsets[l]) / b;
}

std::int64_t tree_shape::child(std::int64_t v, int c) const {
    int l = level_of(v);
    if (l >= n) throw std::domain_error("child: leaves have no children");
    if (c < 0 || c >= b) throw std::domain_error("child: slot out of range");
    return offsets[l + 1] + (v - offsets[l]) * b + c;
}

vertex_ref make_ref(std::initializer_list<int> digits) {
    vertex_ref r;
    r.digits.assign(digits);
    return r;
}

vertex_ref to_ref(const tree_shape& shape, std::int64_t vertex) {
    int l = shape.level_of(vertex);
    std::int64_t pos = vertex - shape.level_offset(l);
    vertex_ref r;
    r.digits.resize(l);
    for (int i = l - 1; i >= 0; --i) {
        r.digits[i] = static_cast<int>(pos % shape.b);
        pos /= shape.b;
    }
    return r;
}

std::int64_t to_index(const tree_shape& shape, const vertex_ref& x) {
    int l = x.level();
    if (l > shape.n) throw std::domain_error("to_index: reference deeper than tree");
    std::int64_t pos = 0;
    for (int i = 0; i < l; ++i) {
        if (x.digits[i] < 0 || x.digits[i] >= shape.b)
            throw std::domain_error("to_index: digit out of range");
        pos = pos * shape.b + x.digits[i];
    }
    return shape.level_offset(l) + pos;
}

std::int64_t leaf_of(const tree_shape& shape, const vertex_ref& x) {
    if (x.level() != shape.n) throw std::domain_error("leaf_of: not a leaf reference");
    return to_index(shape, x) - shape.level_offset(shape.n);
}

double theta(const vertex_ref& x, const tree_shape& shape) {
    if (x.level() != shape.n) throw std::domain_error("theta: defined on depth-n leaves only");
    return theta_of_leaf(shape, leaf_of(shape, x));
}

double theta_of_leaf(const tree_shape& shape, std::int64_t leaf) {
    if (leaf < 0 || leaf >= shape.leaf_count()) throw std::domain_error("theta_of_leaf: out of range");
    return static_cast<double>(leaf) / static_cast<double>(shape.leaf_count());
}

vertex_ref ancestor(const vertex_ref& x, int k) {
    if (k < 0 || k > x.level()) throw std::domain_error("ancestor: k exceeds level");
    vertex_ref r;
    r.digits.assign(x.digits.begin(), x.digits.end() - k);
    return r;
}

std::int64_t ball_first_leaf(const tree_shape& shape, std::int64_t leaf, int k) {
    if (k < 0 || k > shape.n) throw std::domain_error("ball_first_leaf: k out of range");
    std::int64_t bk = shape.pow_b(k);
    return (leaf / bk) * bk;
}

std::vector<vertex_ref> ball_leaves(const vertex_ref& x, int k, const tree_shape& shape) {
    std::int64_t first = ball_first_leaf(shape, leaf_of(shape, x), k);
    std::vector<vertex_ref> out;
    out.reserve(shape.pow_b(k));
    for (std::int64_t j = 0; j < shape.pow_b(k); ++j)
        out.push_back(to_ref(shape, shape.leaf_vertex(first + j)));
    return out;
}

std::int64_t canopy_index_leaf(const tree_shape& shape, std::int64_t xleaf, std::int64_t yleaf) {
    std::int64_t idx = 0;
    std::int64_t xq = xleaf, yq = yleaf;
    // Digits from least significant (deepest) upward; weight b^{n-k} for
    // digit k means the deepest digit has weight 1.
    for (int d = 0; d < shape.n; ++d) {
        int xd = static_cast<int>(xq % shape.b);
        int yd = static_cast<int>(yq % shape.b);
        int diff = yd - xd;
        if (diff < 0) diff += shape.b;
        idx += static_cast<std::int64_t>(diff) * shape.pow_b(d);
        xq /= shape.b;
        yq /= shape.b;
    }
    return idx;
}

std::int64_t canopy_index(const vertex_ref& x, const vertex_ref& y, const tree_shape& shape) {
    if (x.level() != shape.n || y.level() != shape.n)
        throw std::domain_error("canopy_index: both arguments must be depth-n leaves");
    return canopy_index_leaf(shape, leaf_of(shape, x), leaf_of(shape, y));
}

std::int64_t canopy_leaf(const tree_shape& shape, std::int64_t xleaf, std::int64_t j) {
    if (j < 0 || j >= shape.leaf_count()) throw std::domain_error("canopy_leaf: index out of range");
    std::int64_t y = 0;
    std::int64_t xq = xleaf, jq = j;
    for (int d = 0; d < shape.n; ++d) {
        int xd = static_cast<int>(xq % shape.b);
        int jd = static_cast<int>(jq % shape.b);
        y += static_cast<std::int64_t>((xd + jd) % shape.b) * shape.pow_b(d);
        xq /= shape.b;
        jq /= shape.b;
    }
    return y;
}

int ball_distance(const tree_shape& shape, std::int64_t xleaf, std::int64_t yleaf) {
    int d = 0;
    std::int64_t x = xleaf, y = yleaf;
    while (x != y) {
        x /= shape.b;
        y /= shape.b;
        ++d;
    }
    return d;
}

}  // namespace treelocal
