#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "treelocal/gff.hpp"
#include "treelocal/isomorphism.hpp"
#include "treelocal/local_time.hpp"
#include "treelocal/rng.hpp"
#include "treelocal/stats.hpp"
#include "treelocal/tree.hpp"

using namespace treelocal;

TEST_CASE("subtree topology layout") {
    const subtree_topology t22(2, 2);
    CHECK(t22.vertex_count() == 7);
    CHECK(t22.parent[0] == -1);
    CHECK(t22.parent[1] == 0);
    CHECK(t22.parent[2] == 0);
    CHECK(t22.parent[3] == 1);
    CHECK(t22.parent[6] == 2);
    CHECK(subtree_topology(3, 0).vertex_count() == 1);
    CHECK(subtree_topology(3, 1).vertex_count() == 4);
    CHECK_THROWS_AS(subtree_topology(1, 2), std::domain_error);
}

TEST_CASE("single-edge sign probability") {
    const subtree_topology topo(2, 1);
    const double r = 1.0;
    const std::vector<double> y = {r, 2.0, 0.7};
    const std::vector<double> law = enumerate_sign_law(topo, y, r);
    REQUIRE(law.size() == 4);
    double total = 0.0;
    for (double p : law) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Child marginals: P(sigma = +1) = 1 / (1 + exp(-4 r y)), independent
    // across depth-1 children.
    const double p1 = law[1] + law[3];  // bit 0: vertex 1
    const double p2 = law[2] + law[3];  // bit 1: vertex 2
    CHECK(p1 == doctest::Approx(1.0 / (1.0 + std::exp(-8.0))).epsilon(1e-12));
    CHECK(p1 == doctest::Approx(0.9996646498695336).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(1.0 / (1.0 + std::exp(-4.0 * 0.7))).epsilon(1e-12));
    CHECK(law[3] == doctest::Approx(p1 * p2).epsilon(1e-12));

    const std::vector<double> ybig(17, 1.0);
    CHECK_THROWS_AS(enumerate_sign_law(subtree_topology(16, 1), ybig, 1.0), std::length_error);
    CHECK_THROWS_AS(enumerate_sign_law(topo, {r, 1.0}, r), std::domain_error);
    CHECK_THROWS_AS(enumerate_sign_law(topo, y, 2.0), std::domain_error);
}

TEST_CASE("sampler validation and pinned conventions") {
    const subtree_topology topo(2, 2);
    rng_t rng = make_rng(31, 0, 0);
    std::vector<double> y = {0.8, 0.0, 1.2, 0.3, 0.0, 0.9, 0.4};
    for (int i = 0; i < 500; ++i) {
        const sign_config sc = sample_signs(topo, y, y[0], rng);
        REQUIRE(sc.sigma.size() == 7);
        CHECK(sc.sigma[0] == 1);
        CHECK(sc.sigma[1] == 1);  // zero value pinned to +1
        CHECK(sc.sigma[4] == 1);
        for (std::int8_t s : sc.sigma) CHECK((s == 1 || s == -1));
    }
    CHECK_THROWS_AS(sample_signs(topo, {0.8, 1.0}, 0.8, rng), std::domain_error);
    CHECK_THROWS_AS(sample_signs(topo, y, 1.0, rng), std::domain_error);
    std::vector<double> yneg = y;
    yneg[3] = -0.1;
    CHECK_THROWS_AS(sample_signs(topo, yneg, yneg[0], rng), std::domain_error);
}

TEST_CASE("sampler agrees with exhaustive enumeration") {
    struct scenario {
        int b, depth;
        std::uint64_t draws;
    };
    const std::vector<scenario> scenarios = {{2, 2, 500000}, {3, 1, 200000}, {2, 1, 200000}};
    int scen_id = 0;
    for (const auto& sc : scenarios) {
        const subtree_topology topo(sc.b, sc.depth);
        const std::int64_t m = topo.vertex_count();
        rng_t ry = make_rng(32, 0, static_cast<std::uint64_t>(scen_id));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> y(m);
        y[0] = 0.5 + std::fabs(gauss(ry));
        for (std::int64_t v = 1; v < m; ++v) y[v] = std::fabs(gauss(ry));
        if (scen_id == 0) y[3] = 0.0;  // keep one degenerate vertex in the mix

        const std::vector<double> exact = enumerate_sign_law(topo, y, y[0]);
        std::vector<std::uint64_t> counts(exact.size(), 0);
        rng_t rs = make_rng(32, 1, static_cast<std::uint64_t>(scen_id));
        for (std::uint64_t d = 0; d < sc.draws; ++d) {
            const sign_config cfg = sample_signs(topo, y, y[0], rs);
            std::size_t mask = 0;
            for (std::int64_t v = 1; v < m; ++v)
                if (cfg.sigma[v] > 0) mask |= std::size_t(1) << (v - 1);
            ++counts[mask];
        }
        double tv = 0.0;
        for (std::size_t c = 0; c < exact.size(); ++c)
            tv += std::fabs(static_cast<double>(counts[c]) / sc.draws - exact[c]);
        CHECK(0.5 * tv < 0.012);
        ++scen_id;
    }
}

TEST_CASE("degenerate values put all sign mass on +1") {
    const subtree_topology topo(2, 1);
    const std::vector<double> y = {1.0, 0.0, 0.6};
    const std::vector<double> law = enumerate_sign_law(topo, y, 1.0);
    CHECK(law[0] == 0.0);  // configurations with sigma_1 = -1 carry no mass
    CHECK(law[2] == 0.0);
    CHECK(law[1] + law[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coupled field: exact identity and agreement region") {
    for (int b : {2, 3}) {
        const int n = 4;
        tree_shape s(b, n);
        for (int k : {1, 2, n}) {
            for (int rep = 0; rep < 100; ++rep) {
                const std::uint64_t salt =
                    static_cast<std::uint64_t>(((b * 8 + k) * 128) + rep);
                rng_t rl = make_rng(33, 1, salt);
                const local_time_field L = sample_root_field(s, 2.0, rl);
                rng_t rh = make_rng(33, 2, salt);
                const gaussian_field h = sample_gff(s, rh);
                rng_t rs = make_rng(33, 3, salt);
                const coupled_triple c = couple(L, h, k, rs);
                CHECK(c.k == k);
                CHECK(coupling_residual(c) < 1e-12);
                for (std::int64_t v = 0; v < s.level_offset(n - k + 1); ++v)
                    CHECK(c.h_tilde.values[v] == h.values[v]);
            }
        }
    }
}

TEST_CASE("full-depth coupling ties the squares together") {
    tree_shape s(2, 5);
    const double t = 2.0;
    for (int rep = 0; rep < 200; ++rep) {
        rng_t rl = make_rng(34, 1, static_cast<std::uint64_t>(rep));
        const local_time_field L = sample_root_field(s, t, rl);
        rng_t rh = make_rng(34, 2, static_cast<std::uint64_t>(rep));
        const gaussian_field h = sample_gff(s, rh);
        rng_t rs = make_rng(34, 3, static_cast<std::uint64_t>(rep));
        const coupled_triple c = couple(L, h, s.n, rs);
        CHECK(c.h_tilde.values[0] == 0.0);
        for (std::int64_t v = 0; v < s.vertex_count(); ++v) {
            const double lhs = L.values[v] + h.values[v] * h.values[v];
            const double rhs_root = c.h_tilde.values[v] + std::sqrt(t);
            CHECK(lhs == doctest::Approx(rhs_root * rhs_root).epsilon(1e-9));
        }
    }
}

TEST_CASE("coupled field law matches a fresh field") {
    tree_shape s(2, 4);
    const double t = 2.0;
    const int N = 20000;
    const std::int64_t nl = s.leaf_count();
    std::vector<std::vector<double>> ht(nl, std::vector<double>(N));
    std::vector<std::vector<double>> ref(nl, std::vector<double>(N));
    for (int i = 0; i < N; ++i) {
        rng_t rl = make_rng(35, 1, static_cast<std::uint64_t>(i));
        const local_time_field L = sample_root_field(s, t, rl);
        rng_t rh = make_rng(35, 2, static_cast<std::uint64_t>(i));
        const gaussian_field h = sample_gff(s, rh);
        rng_t rs = make_rng(35, 3, static_cast<std::uint64_t>(i));
        const coupled_triple c = couple(L, h, s.n, rs);
        rng_t rr = make_rng(35, 4, static_cast<std::uint64_t>(i));
        const gaussian_field g = sample_gff(s, rr);
        for (std::int64_t l = 0; l < nl; ++l) {
            ht[l][i] = c.h_tilde.leaf(l);
            ref[l][i] = g.leaf(l);
        }
    }
    for (std::int64_t l = 0; l < nl; ++l) CHECK(ks_stat(ht[l], ref[l]) < 0.03);
    for (std::int64_t a = 0; a < nl; ++a) {
        for (std::int64_t c2 = a; c2 < nl; ++c2) {
            const double target = 0.5 * (s.n - ball_distance(s, a, c2));
            const cov_estimate cv = covariance(ht[a], ht[c2]);
            CHECK(std::fabs(cv.value - target) < 0.07);
        }
    }
}
