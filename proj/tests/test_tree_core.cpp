#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>
#include <vector>

#include "treelocal/tree.hpp"

using namespace treelocal;

TEST_CASE("shape indexing") {
    tree_shape s(2, 3);
    CHECK(s.leaf_count() == 8);
    CHECK(s.vertex_count() == 15);
    CHECK(s.level_offset(0) == 0);
    CHECK(s.level_offset(1) == 1);
    CHECK(s.level_offset(2) == 3);
    CHECK(s.level_offset(3) == 7);
    CHECK(s.level_size(2) == 4);
    CHECK(s.level_of(0) == 0);
    CHECK(s.level_of(6) == 2);
    CHECK(s.level_of(7) == 3);
    CHECK(s.pos_of(6) == 3);
    CHECK(s.leaf_vertex(0) == 7);
    CHECK(s.leaf_vertex(7) == 14);

    CHECK_THROWS_AS(tree_shape(1, 3), std::domain_error);
    CHECK_THROWS_AS(tree_shape(2, 0), std::domain_error);
    CHECK_THROWS_AS(s.parent(0), std::domain_error);
    CHECK_THROWS_AS(s.child(s.leaf_vertex(0), 0), std::domain_error);
    CHECK_THROWS_AS(s.child(0, 2), std::domain_error);
}

TEST_CASE("parent child inverse, exhaustive") {
    for (int b : {2, 3}) {
        for (int n : {1, 2, 3, 4}) {
            tree_shape s(b, n);
            for (std::int64_t v = 0; v < s.vertex_count(); ++v) {
                if (s.level_of(v) < n) {
                    for (int c = 0; c < b; ++c) CHECK(s.parent(s.child(v, c)) == v);
                }
                if (v > 0) {
                    const std::int64_t p = s.parent(v);
                    CHECK(s.level_of(p) == s.level_of(v) - 1);
                    bool found = false;
                    for (int c = 0; c < b; ++c) found = found || s.child(p, c) == v;
                    CHECK(found);
                }
            }
        }
    }
}

TEST_CASE("digit references round-trip") {
    for (int b : {2, 3}) {
        tree_shape s(b, 4);
        for (std::int64_t v = 0; v < s.vertex_count(); ++v) {
            const vertex_ref r = to_ref(s, v);
            CHECK(r.level() == s.level_of(v));
            CHECK(to_index(s, r) == v);
        }
    }
    tree_shape s(2, 3);
    CHECK(to_index(s, make_ref({})) == 0);
    CHECK(to_index(s, make_ref({1, 0, 1})) == s.leaf_vertex(5));
    CHECK(leaf_of(s, make_ref({1, 0, 1})) == 5);
    CHECK_THROWS_AS(leaf_of(s, make_ref({1, 0})), std::domain_error);
    CHECK_THROWS_AS(to_index(s, make_ref({2, 0, 0})), std::domain_error);
}

TEST_CASE("theta is the base-b expansion") {
    tree_shape s2(2, 3);
    CHECK(theta(make_ref({1, 0, 1}), s2) == doctest::Approx(0.625).epsilon(1e-15));
    tree_shape s3(3, 2);
    CHECK(theta(make_ref({2, 1}), s3) == doctest::Approx(7.0 / 9.0).epsilon(1e-15));

    for (int b : {2, 3}) {
        for (int n : {1, 3, 4}) {
            tree_shape s(b, n);
            for (std::int64_t l = 0; l < s.leaf_count(); ++l) {
                CHECK(theta_of_leaf(s, l) ==
                      doctest::Approx(static_cast<double>(l) / s.leaf_count()).epsilon(1e-15));
                CHECK(theta(to_ref(s, s.leaf_vertex(l)), s) == theta_of_leaf(s, l));
            }
        }
    }
    CHECK_THROWS_AS(theta(make_ref({1}), s2), std::domain_error);
    CHECK_THROWS_AS(theta_of_leaf(s2, 8), std::domain_error);
}

TEST_CASE("ancestor strips trailing digits") {
    const vertex_ref x = make_ref({1, 0, 2, 1});
    CHECK(ancestor(x, 0).digits == x.digits);
    CHECK(ancestor(x, 2).digits == std::vector<int>{1, 0});
    CHECK(ancestor(x, 4).digits.empty());
    CHECK_THROWS_AS(ancestor(x, 5), std::domain_error);
}

TEST_CASE("balls are ancestor subtrees") {
    for (int b : {2, 3}) {
        tree_shape s(b, 4);
        for (std::int64_t l = 0; l < s.leaf_count(); ++l) {
            for (int k = 0; k <= s.n; ++k) {
                const std::int64_t first = ball_first_leaf(s, l, k);
                CHECK(first <= l);
                CHECK(l < first + s.pow_b(k));
                CHECK(first % s.pow_b(k) == 0);
                const auto leaves = ball_leaves(to_ref(s, s.leaf_vertex(l)), k, s);
                REQUIRE(leaves.size() == static_cast<std::size_t>(s.pow_b(k)));
                const vertex_ref anc = ancestor(to_ref(s, s.leaf_vertex(l)), k);
                for (std::size_t j = 0; j < leaves.size(); ++j) {
                    CHECK(leaf_of(s, leaves[j]) == first + static_cast<std::int64_t>(j));
                    CHECK(ancestor(leaves[j], k).digits == anc.digits);
                }
            }
        }
    }
}

TEST_CASE("canopy enumeration is a based bijection") {
    for (int b : {2, 3}) {
        tree_shape s(b, 3);
        for (std::int64_t x = 0; x < s.leaf_count(); ++x) {
            CHECK(canopy_index_leaf(s, x, x) == 0);
            std::set<std::int64_t> seen;
            for (std::int64_t y = 0; y < s.leaf_count(); ++y) {
                const std::int64_t j = canopy_index_leaf(s, x, y);
                CHECK(j >= 0);
                CHECK(j < s.leaf_count());
                seen.insert(j);
                CHECK(canopy_leaf(s, x, j) == y);
                // Membership: y lies in B_k(x) iff its canopy index is < b^k.
                for (int k = 0; k <= s.n; ++k) {
                    const bool in_ball = ball_first_leaf(s, x, k) == ball_first_leaf(s, y, k);
                    CHECK(in_ball == (j < s.pow_b(k)));
                }
            }
            CHECK(seen.size() == static_cast<std::size_t>(s.leaf_count()));
        }
    }
    tree_shape s(2, 3);
    CHECK_THROWS_AS(canopy_index(make_ref({0}), make_ref({0, 0, 0}), s), std::domain_error);
    CHECK_THROWS_AS(canopy_leaf(s, 0, 8), std::domain_error);
}

TEST_CASE("ball distance counts unshared depth") {
    tree_shape s(2, 4);
    CHECK(ball_distance(s, 5, 5) == 0);
    CHECK(ball_distance(s, 0, 1) == 1);
    CHECK(ball_distance(s, 0, 15) == 4);
    CHECK(ball_distance(s, 4, 6) == 2);
    for (std::int64_t x = 0; x < s.leaf_count(); ++x) {
        for (std::int64_t y = 0; y < s.leaf_count(); ++y) {
            const int d = ball_distance(s, x, y);
            CHECK(d == ball_distance(s, y, x));
            // Smallest k whose ball at x contains y.
            for (int k = 0; k <= s.n; ++k) {
                const bool in_ball = ball_first_leaf(s, x, k) == ball_first_leaf(s, y, k);
                CHECK(in_ball == (k >= d));
            }
        }
    }
}
