#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "treelocal/gff.hpp"
#include "treelocal/rng.hpp"
#include "treelocal/stats.hpp"
#include "treelocal/tree.hpp"

using namespace treelocal;

TEST_CASE("field covariance: half the shared depth") {
    tree_shape s(2, 3);
    const int N = 50000;
    const std::int64_t nl = s.leaf_count();
    std::vector<std::vector<double>> leaves(nl, std::vector<double>(N));
    for (int i = 0; i < N; ++i) {
        rng_t rng = make_rng(21, 0, static_cast<std::uint64_t>(i));
        const gaussian_field h = sample_gff(s, rng);
        CHECK(h.values[0] == 0.0);
        for (std::int64_t l = 0; l < nl; ++l) leaves[l][i] = h.leaf(l);
    }
    for (std::int64_t a = 0; a < nl; ++a) {
        for (std::int64_t c = a; c < nl; ++c) {
            const double target = 0.5 * (s.n - ball_distance(s, a, c));
            const cov_estimate cv = covariance(leaves[a], leaves[c]);
            CHECK(std::fabs(cv.value - target) < 0.045);
        }
    }
    const double ks = ks_stat(leaves[3], [](double x) { return normal_cdf(x / std::sqrt(1.5)); });
    CHECK(ks < 0.02);
}

TEST_CASE("centering constants") {
    const centering_constants c10 = centering(2, 10);
    CHECK_FALSE(c10.has_a);
    CHECK(c10.m_n == doctest::Approx(5.559859558244196).epsilon(1e-14));
    CHECK(c10.m_tilde == doctest::Approx(6.251281196577391).epsilon(1e-14));

    const centering_constants c14 = centering(2, 14);
    CHECK(c14.m_n == doctest::Approx(8.485933659534751).epsilon(1e-14));

    const centering_constants a10 = centering(2, 10, 1.0);
    CHECK(a10.has_a);
    CHECK(a10.a_n == doctest::Approx(5.531239760057086).epsilon(1e-14));
    CHECK(a10.m_tilde == c10.m_tilde);
    CHECK(centering(2, 14, 5.0).a_n + std::sqrt(5.0) ==
          doctest::Approx(10.919148193917339).epsilon(1e-14));
    CHECK(centering(2, 10, 5.0).a_n + std::sqrt(5.0) ==
          doctest::Approx(7.976971535538383).epsilon(1e-14));

    // Direct recomputation from the defining expressions.
    for (int b : {2, 3, 5}) {
        for (int n : {2, 7, 31}) {
            const double slb = std::sqrt(std::log(b));
            const centering_constants cc = centering(b, n, 2.5);
            CHECK(cc.m_n == doctest::Approx(slb * n - std::log(n) / slb).epsilon(1e-13));
            CHECK(cc.m_tilde ==
                  doctest::Approx(n * slb - 0.75 * std::log(n) / slb).epsilon(1e-13));
            const double st = std::sqrt(2.5);
            CHECK(cc.a_n == doctest::Approx(cc.m_tilde -
                                            std::log((n + st) / st) / (4.0 * slb))
                                .epsilon(1e-13));
        }
    }

    CHECK_THROWS_AS(centering(1, 10), std::domain_error);
    CHECK_THROWS_AS(centering(2, 0), std::domain_error);
    CHECK_THROWS_AS(centering(2, 10, 0.0), std::domain_error);
}

TEST_CASE("depth-1 max law and restricted-half dominance") {
    const int N = 20000;
    rng_t rng = make_rng(22, 0, 0);
    const std::vector<double> full = brw_max_samples(2, 1, false, N, rng);
    REQUIRE(full.size() == static_cast<std::size_t>(N));
    // Max of two independent Normal(0, 1/2) values.
    const double ksf = ks_stat(full, [](double x) {
        const double p = normal_cdf(x / std::sqrt(0.5));
        return p * p;
    });
    CHECK(ksf < 0.02);

    rng_t rng2 = make_rng(22, 1, 0);
    const std::vector<double> half = brw_max_samples(2, 1, true, N, rng2);
    // b = 2: the restricted side is the single right leaf.
    const double ksh = ks_stat(half, [](double x) { return normal_cdf(x / std::sqrt(0.5)); });
    CHECK(ksh < 0.02);

    rng_t rng3 = make_rng(22, 2, 0);
    for (int i = 0; i < 2000; ++i) {
        const brw_max_pair p = sample_brw_max_pair(2, 4, rng3);
        CHECK(p.m_restricted <= p.m_full);
    }
    CHECK_THROWS_AS(brw_max_samples(2, 0, false, 10, rng3), std::domain_error);
}

TEST_CASE("deeper max grows with depth") {
    rng_t rng = make_rng(23, 0, 0);
    const std::vector<double> m2 = brw_max_samples(2, 2, false, 20000, rng);
    const std::vector<double> m6 = brw_max_samples(2, 6, false, 20000, rng);
    CHECK(mean(m6) > mean(m2) + 0.5);
    // Recentered means stay within a unit band of zero at these depths.
    CHECK(std::fabs(mean(m6) - centering(2, 6).m_tilde) < 1.0);
}
