#include "treelocal/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "build_info.hpp"
#include "treelocal/barrier.hpp"
#include "treelocal/extremal.hpp"
#include "treelocal/gff.hpp"
#include "treelocal/io.hpp"
#include "treelocal/isomorphism.hpp"
#include "treelocal/local_time.hpp"
#include "treelocal/parallel.hpp"
#include "treelocal/rng.hpp"
#include "treelocal/tree.hpp"

namespace treelocal {

namespace {

using nlohmann::json;

// RNG phase constants; replica streams are (seed, phase | salt << 8, replica).
constexpr std::uint64_t s_field = 1;  // local-time fields
constexpr std::uint64_t s_gff = 2;    // coupled Gaussian fields
constexpr std::uint64_t s_signs = 3;  // sign draws
constexpr std::uint64_t s_ref = 4;    // reference fields for law comparisons
constexpr std::uint64_t s_ctmc = 5;   // event-driven walks
constexpr std::uint64_t s_path = 6;   // pinned bridges
constexpr std::uint64_t s_aux = 7;    // trial shapes, auxiliary draws
constexpr std::uint64_t s_curve = 8;  // CDF curve samples

std::uint64_t salted(std::uint64_t phase, std::uint64_t salt) { return phase | (salt << 8); }

double cfg_num(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_number())
        throw config_error("config key '" + key + "' must be a number");
    return c.at(key).get<double>();
}

std::int64_t cfg_int(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_number_integer())
        throw config_error("config key '" + key + "' must be an integer");
    return c.at(key).get<std::int64_t>();
}

bool cfg_bool(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_boolean())
        throw config_error("config key '" + key + "' must be a boolean");
    return c.at(key).get<bool>();
}

std::string cfg_str(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_string())
        throw config_error("config key '" + key + "' must be a string");
    return c.at(key).get<std::string>();
}

std::vector<std::int64_t> cfg_int_list(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_array())
        throw config_error("config key '" + key + "' must be an array");
    std::vector<std::int64_t> out;
    for (const auto& v : c.at(key)) {
        if (!v.is_number_integer())
            throw config_error("config key '" + key + "' must hold integers");
        out.push_back(v.get<std::int64_t>());
    }
    if (out.empty()) throw config_error("config key '" + key + "' must be nonempty");
    return out;
}

std::vector<double> cfg_num_list(const json& c, const std::string& key) {
    if (!c.contains(key) || !c.at(key).is_array())
        throw config_error("config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : c.at(key)) {
        if (!v.is_number()) throw config_error("config key '" + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    if (out.empty()) throw config_error("config key '" + key + "' must be nonempty");
    return out;
}

std::uint64_t cfg_seed(const json& c) {
    if (!c.contains("seed") || !c.at("seed").is_number_integer())
        throw config_error("config key 'seed' must be an integer");
    if (c.at("seed").is_number_unsigned()) return c.at("seed").get<std::uint64_t>();
    const std::int64_t s = c.at("seed").get<std::int64_t>();
    return static_cast<std::uint64_t>(s);
}

int cfg_workers(const json& c) {
    const std::int64_t w = cfg_int(c, "workers");
    if (w < 1) throw config_error("workers must be >= 1");
    return static_cast<int>(w);
}

std::int64_t cfg_replicas(const json& c, const std::string& key = "replicas") {
    const std::int64_t r = cfg_int(c, key);
    if (r < 1) throw config_error(key + " must be >= 1");
    return r;
}

std::string fmt_i(std::int64_t v) { return std::to_string(v); }

struct recipe_out {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<test_report> reports;
    json extras = json::object();  // free-form diagnostics for the meta file
};

// ---------------------------------------------------------------------------
// coupling-identity: pointwise identity residuals, optional law checks on the
// coupled field (leaf covariance structure and per-leaf KS against a fresh
// Gaussian field).
recipe_out run_coupling_identity(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double tol = cfg_num(cfg, "tol");
    const bool law = cfg_bool(cfg, "law_checks");
    const double ks_tol = cfg_num(cfg, "ks_tol");
    const double cov_tol = cfg_num(cfg, "cov_tol");
    tree_shape shape(b, n);
    int k = static_cast<int>(cfg_int(cfg, "k"));
    if (k == 0) k = n;
    if (k < 1 || k > n) throw config_error("k must lie in [1, n] (0 selects n)");

    const std::int64_t nl = shape.leaf_count();
    std::vector<double> residuals(R);
    std::vector<double> ht, ref;  // row-major replica x leaf
    if (law) {
        ht.resize(static_cast<std::size_t>(R) * nl);
        ref.resize(static_cast<std::size_t>(R) * nl);
    }

    run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
        rng_t rl = make_rng(seed, s_field, i);
        const local_time_field L = sample_root_field(shape, t, rl);
        rng_t rh = make_rng(seed, s_gff, i);
        const gaussian_field h = sample_gff(shape, rh);
        rng_t rs = make_rng(seed, s_signs, i);
        const coupled_triple trip = couple(L, h, k, rs);
        residuals[i] = coupling_residual(trip);
        if (law) {
            rng_t rr = make_rng(seed, s_ref, i);
            const gaussian_field g = sample_gff(shape, rr);
            for (std::int64_t l = 0; l < nl; ++l) {
                ht[i * nl + l] = trip.h_tilde.leaf(l);
                ref[i * nl + l] = g.leaf(l);
            }
        }
    });

    recipe_out out;
    out.columns = {"replica", "residual"};
    double maxres = 0.0;
    for (std::int64_t i = 0; i < R; ++i) {
        maxres = std::max(maxres, residuals[i]);
        out.rows.push_back({fmt_i(i), format_double(residuals[i])});
    }
    out.reports.push_back(make_report("max-residual", maxres, tol,
                                      static_cast<std::uint64_t>(R), 0, seed));

    if (law) {
        // Leaf covariance of the coupled field: target 1/2 per shared edge.
        std::vector<double> means(nl, 0.0);
        for (std::int64_t i = 0; i < R; ++i)
            for (std::int64_t l = 0; l < nl; ++l) means[l] += ht[i * nl + l];
        for (auto& m : means) m /= static_cast<double>(R);
        double maxdev = 0.0;
        for (std::int64_t a = 0; a < nl; ++a) {
            for (std::int64_t c = a; c < nl; ++c) {
                double acc = 0.0;
                for (std::int64_t i = 0; i < R; ++i)
                    acc += (ht[i * nl + a] - means[a]) * (ht[i * nl + c] - means[c]);
                const double cov = acc / static_cast<double>(R - 1);
                const double target = 0.5 * (n - ball_distance(shape, a, c));
                maxdev = std::max(maxdev, std::fabs(cov - target));
            }
        }
        out.reports.push_back(make_report("cov-dev-max", maxdev, cov_tol,
                                          static_cast<std::uint64_t>(R), 0, seed));
        double maxks = 0.0;
        std::vector<double> colA(R), colB(R);
        for (std::int64_t l = 0; l < nl; ++l) {
            for (std::int64_t i = 0; i < R; ++i) {
                colA[i] = ht[i * nl + l];
                colB[i] = ref[i * nl + l];
            }
            maxks = std::max(maxks, ks_stat(colA, colB));
        }
        out.reports.push_back(make_report("leaf-ks-max", maxks, ks_tol,
                                          static_cast<std::uint64_t>(R),
                                          static_cast<std::uint64_t>(R), seed));
    }
    return out;
}

// ---------------------------------------------------------------------------
// signlaw-enum: sampler vs exhaustive enumeration on random small subtrees.
recipe_out run_signlaw_enum(const json& cfg) {
    const std::int64_t trials = cfg_replicas(cfg, "trials");
    const std::int64_t draws = cfg_replicas(cfg, "draws");
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double tv_tol = cfg_num(cfg, "tv_tol");

    // (b, depth) menu, every entry at most 7 vertices.
    static const std::vector<std::pair<int, int>> shapes = {{2, 1}, {2, 2}, {3, 1},
                                                            {4, 1}, {5, 1}, {6, 1}};
    struct trial_row {
        int b, depth;
        std::int64_t verts;
        double tv;
    };
    std::vector<trial_row> rowsv(trials);

    run_replicas(static_cast<std::uint64_t>(trials), workers, [&](std::uint64_t i) {
        rng_t ry = make_rng(seed, s_aux, i);
        std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
        const auto [sb, sd] = shapes[pick(ry)];
        subtree_topology topo(sb, sd);
        const std::int64_t m = topo.vertex_count();
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> y(m);
        y[0] = 0.5 + std::fabs(gauss(ry));
        for (std::int64_t v = 1; v < m; ++v) y[v] = std::fabs(gauss(ry));

        const std::vector<double> exact = enumerate_sign_law(topo, y, y[0]);
        std::vector<std::int64_t> counts(exact.size(), 0);
        rng_t rs = make_rng(seed, s_signs, i);
        for (std::int64_t d = 0; d < draws; ++d) {
            const sign_config sc = sample_signs(topo, y, y[0], rs);
            std::size_t mask = 0;
            for (std::int64_t v = 1; v < m; ++v)
                if (sc.sigma[v] > 0) mask |= std::size_t(1) << (v - 1);
            ++counts[mask];
        }
        double tv = 0.0;
        for (std::size_t c = 0; c < exact.size(); ++c)
            tv += std::fabs(static_cast<double>(counts[c]) / draws - exact[c]);
        rowsv[i] = {sb, sd, m, 0.5 * tv};
    });

    recipe_out out;
    out.columns = {"trial", "b", "depth", "vertices", "tv"};
    double maxtv = 0.0;
    for (std::int64_t i = 0; i < trials; ++i) {
        maxtv = std::max(maxtv, rowsv[i].tv);
        out.rows.push_back({fmt_i(i), fmt_i(rowsv[i].b), fmt_i(rowsv[i].depth),
                            fmt_i(rowsv[i].verts), format_double(rowsv[i].tv)});
    }
    out.reports.push_back(make_report("tv-max", maxtv, tv_tol,
                                      static_cast<std::uint64_t>(trials),
                                      static_cast<std::uint64_t>(draws), seed));
    return out;
}

// ---------------------------------------------------------------------------
// sampler-equivalence: hierarchical field vs event-driven walk, same law.
recipe_out run_sampler_equivalence(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double ks_tol = cfg_num(cfg, "ks_tol");
    const double cov_z_tol = cfg_num(cfg, "cov_z_tol");
    tree_shape shape(b, n);
    const std::int64_t nl = shape.leaf_count();

    std::vector<double> A(static_cast<std::size_t>(R) * nl), B(static_cast<std::size_t>(R) * nl);
    const vertex_ref root = make_ref({});
    run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
        rng_t ra = make_rng(seed, s_field, i);
        const local_time_field fa = sample_root_field(shape, t, ra);
        rng_t rb = make_rng(seed, s_ctmc, i);
        const local_time_field fb = simulate_ctmc(shape, root, ctmc_rule::accumulate_root, t, rb);
        for (std::int64_t l = 0; l < nl; ++l) {
            A[i * nl + l] = fa.leaf(l);
            B[i * nl + l] = fb.leaf(l);
        }
    });

    recipe_out out;
    out.columns = {"kind", "i", "j", "value"};
    std::vector<double> colA(R), colB(R);
    double maxks = 0.0;
    for (std::int64_t l = 0; l < nl; ++l) {
        for (std::int64_t i = 0; i < R; ++i) {
            colA[i] = A[i * nl + l];
            colB[i] = B[i * nl + l];
        }
        const double ks = ks_stat(colA, colB);
        maxks = std::max(maxks, ks);
        out.rows.push_back({"ks", fmt_i(l), fmt_i(-1), format_double(ks)});
    }
    double maxz = 0.0;
    std::vector<double> colA2(R), colB2(R);
    for (std::int64_t a = 0; a < nl; ++a) {
        for (std::int64_t i = 0; i < R; ++i) {
            colA[i] = A[i * nl + a];
            colB[i] = B[i * nl + a];
        }
        for (std::int64_t c = a; c < nl; ++c) {
            for (std::int64_t i = 0; i < R; ++i) {
                colA2[i] = A[i * nl + c];
                colB2[i] = B[i * nl + c];
            }
            const cov_estimate ca = covariance(colA, colA2);
            const cov_estimate cb = covariance(colB, colB2);
            const double se = std::sqrt(ca.se * ca.se + cb.se * cb.se);
            const double z = se > 0.0 ? std::fabs(ca.value - cb.value) / se : 0.0;
            maxz = std::max(maxz, z);
            out.rows.push_back({"covz", fmt_i(a), fmt_i(c), format_double(z)});
        }
    }
    out.reports.push_back(make_report("leaf-ks-max", maxks, ks_tol,
                                      static_cast<std::uint64_t>(R),
                                      static_cast<std::uint64_t>(R), seed));
    out.reports.push_back(make_report("cov-z-max", maxz, cov_z_tol,
                                      static_cast<std::uint64_t>(R),
                                      static_cast<std::uint64_t>(R), seed));
    return out;
}

// ---------------------------------------------------------------------------
// leafstart-law: spine marginals against Exponential(mean depth), hierarchical
// vs walk per-leaf law, and exact support (fields vanish off the first child
// subtree).
recipe_out run_leafstart_law(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double ks_tol = cfg_num(cfg, "ks_tol");
    const bool support_only = cfg_bool(cfg, "support_only");
    const std::vector<std::int64_t> depths = cfg_int_list(cfg, "depths");
    for (std::int64_t k : depths)
        if (k < 1 || k > n) throw config_error("depths entries must lie in [1, n]");
    tree_shape shape(b, n);
    const std::int64_t nl = shape.leaf_count();
    const std::int64_t support = shape.pow_b(n - 1);  // leaves with theta < 1/b

    std::vector<float> A, B;  // support-leaf columns, hierarchical and walk
    std::vector<double> spine;
    if (!support_only) {
        A.resize(static_cast<std::size_t>(R) * support);
        B.resize(static_cast<std::size_t>(R) * support);
        spine.resize(static_cast<std::size_t>(R) * n);
    }
    std::vector<double> offmax_h(R, 0.0), offmax_w(R, 0.0);

    const vertex_ref start = to_ref(shape, shape.leaf_vertex(0));
    run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
        rng_t rh = make_rng(seed, s_field, i);
        const local_time_field fh = sample_leafstart_field(shape, rh);
        rng_t rw = make_rng(seed, s_ctmc, i);
        const local_time_field fw =
            simulate_ctmc(shape, start, ctmc_rule::first_hit_root, 0.0, rw);
        double mh = 0.0, mw = 0.0;
        for (std::int64_t l = support; l < nl; ++l) {
            mh = std::max(mh, std::fabs(fh.leaf(l)));
            mw = std::max(mw, std::fabs(fw.leaf(l)));
        }
        offmax_h[i] = mh;
        offmax_w[i] = mw;
        if (!support_only) {
            for (std::int64_t l = 0; l < support; ++l) {
                A[i * support + l] = static_cast<float>(fh.leaf(l));
                B[i * support + l] = static_cast<float>(fw.leaf(l));
            }
            for (int k = 1; k <= n; ++k)
                spine[i * n + (k - 1)] = fw.at(shape.level_offset(k));  // leftmost vertex
        }
    });

    recipe_out out;
    out.columns = {"kind", "index", "value"};
    double suph = 0.0, supw = 0.0;
    for (std::int64_t i = 0; i < R; ++i) {
        suph = std::max(suph, offmax_h[i]);
        supw = std::max(supw, offmax_w[i]);
    }
    out.rows.push_back({"support_max_hier", fmt_i(0), format_double(suph)});
    out.rows.push_back({"support_max_walk", fmt_i(0), format_double(supw)});
    out.reports.push_back(make_report("support-max", std::max(suph, supw), 0.0,
                                      static_cast<std::uint64_t>(R), 0, seed));
    if (support_only) return out;

    std::vector<double> col(R);
    for (std::int64_t k : depths) {
        for (std::int64_t i = 0; i < R; ++i) col[i] = spine[i * n + (k - 1)];
        const double mean_k = static_cast<double>(k);
        const double ks =
            ks_stat(col, [mean_k](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mean_k); });
        out.rows.push_back({"exp_ks", fmt_i(k), format_double(ks)});
        out.reports.push_back(make_report("exp-ks-k" + std::to_string(k), ks, ks_tol,
                                          static_cast<std::uint64_t>(R), 0, seed));
    }

    std::vector<double> colA(R), colB(R);
    double maxks = 0.0;
    for (std::int64_t l = 0; l < support; ++l) {
        for (std::int64_t i = 0; i < R; ++i) {
            colA[i] = A[i * support + l];
            colB[i] = B[i * support + l];
        }
        const double ks = ks_stat(colA, colB);
        maxks = std::max(maxks, ks);
        out.rows.push_back({"cross_ks", fmt_i(l), format_double(ks)});
    }
    out.reports.push_back(make_report("cross-ks-max", maxks, ks_tol,
                                      static_cast<std::uint64_t>(R),
                                      static_cast<std::uint64_t>(R), seed));
    return out;
}

// ---------------------------------------------------------------------------
// max-tail: survival slope of the centered leaf maximum of sqrt(local time).
recipe_out run_max_tail(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double u1 = cfg_num(cfg, "u1");
    const double u2 = cfg_num(cfg, "u2");
    const double slope_tol = cfg_num(cfg, "slope_tol");
    const int points = static_cast<int>(cfg_int(cfg, "points"));
    tree_shape shape(b, n);
    const std::int64_t nl = shape.leaf_count();
    const centering_constants cc = centering(b, n, t);
    const double center = cc.a_n + std::sqrt(t);

    std::vector<double> centered(R);
    run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
        rng_t rl = make_rng(seed, s_field, i);
        const local_time_field L = sample_root_field(shape, t, rl);
        double mx = 0.0;
        for (std::int64_t l = 0; l < nl; ++l) mx = std::max(mx, L.leaf(l));
        centered[i] = std::sqrt(mx) - center;
    });

    recipe_out out;
    out.columns = {"replica", "centered_max"};
    for (std::int64_t i = 0; i < R; ++i)
        out.rows.push_back({fmt_i(i), format_double(centered[i])});

    const double target = 2.0 * std::sqrt(std::log(static_cast<double>(b)));
    try {
        const tail_fit fit = tail_slope(centered, u1, u2, points);
        const double rel = std::fabs(fit.slope_corrected + target) / target;
        out.reports.push_back(
            make_report("corrected-slope-rel-err", rel, slope_tol, fit.exceedances, 0, seed));
        out.extras["slope_raw"] = fit.slope_raw;
        out.extras["slope_corrected"] = fit.slope_corrected;
        out.extras["slope_target"] = -target;
        out.extras["exceedances"] = fit.exceedances;
    } catch (const std::length_error& e) {
        out.reports.push_back(
            make_report("corrected-slope-rel-err", 1e308, slope_tol, 0, 0, seed));
        out.extras["tail_error"] = e.what();
    }
    return out;
}

// ---------------------------------------------------------------------------
// clustering: probability that a near-maximal level set contains a pair at
// intermediate ball distance, at two depths. The primary threshold is the
// depth-driven centering minus lambda; the t-corrected variant rides along in
// the CSV and extras.
recipe_out run_clustering(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::vector<std::int64_t> ns = cfg_int_list(cfg, "ns");
    const double lambda = cfg_num(cfg, "lambda");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double p_tol = cfg_num(cfg, "p_tol");
    for (std::int64_t n : ns)
        if (n < 7) throw config_error("ns entries must be >= 7 for a nonempty distance window");

    struct setting_result {
        double p_lit, se_lit, p_corr, se_corr, mean_sz_lit, mean_sz_corr;
    };
    std::vector<setting_result> res(ns.size());

    recipe_out out;
    out.columns = {"centering", "n", "pair_prob", "se", "mean_level_set"};
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const int n = static_cast<int>(ns[ni]);
        tree_shape shape(b, n);
        const std::int64_t nl = shape.leaf_count();
        const centering_constants cc = centering(b, n, t);
        const double thr_corr = (std::sqrt(t) + cc.a_n) - lambda;
        const double thr_lit = cc.m_n - lambda;
        // Pair at ball distance in [3, n-3]: same level-3 ancestor, different
        // level-(n-2) ancestor.
        const std::int64_t div_lo = shape.pow_b(n - 3);
        const std::int64_t div_hi = shape.pow_b(2);

        std::vector<char> hit_lit(R, 0), hit_corr(R, 0);
        std::vector<std::int64_t> size_lit(R, 0), size_corr(R, 0);
        run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
            rng_t rl = make_rng(seed, salted(s_field, static_cast<std::uint64_t>(n)), i);
            const local_time_field L = sample_root_field(shape, t, rl);
            for (int kind = 0; kind < 2; ++kind) {
                const double thr = kind == 0 ? thr_lit : thr_corr;
                const double cut = (thr > 0.0 ? thr * thr : 0.0);
                bool pair = false;
                std::int64_t count = 0;
                std::int64_t group = -1, first_hi = -1;
                bool group_pair_seen = false;
                for (std::int64_t l = 0; l < nl; ++l) {
                    const double v = L.leaf(l);
                    if (v < cut || std::sqrt(v) < thr) continue;
                    ++count;
                    const std::int64_t g = l / div_lo;
                    const std::int64_t h = l / div_hi;
                    if (g != group) {
                        group = g;
                        first_hi = h;
                        group_pair_seen = false;
                    } else if (!group_pair_seen && h != first_hi) {
                        group_pair_seen = true;
                        pair = true;
                    }
                }
                if (kind == 0) {
                    hit_lit[i] = pair;
                    size_lit[i] = count;
                } else {
                    hit_corr[i] = pair;
                    size_corr[i] = count;
                }
            }
        });

        auto agg = [&](const std::vector<char>& hits) {
            double s = 0.0;
            for (char h : hits) s += h;
            const double p = s / static_cast<double>(R);
            return std::pair<double, double>(p, std::sqrt(p * (1.0 - p) / static_cast<double>(R)));
        };
        const auto [pl, sel] = agg(hit_lit);
        const auto [pc, sec] = agg(hit_corr);
        auto mean_sz = [&](const std::vector<std::int64_t>& sizes) {
            double m = 0.0;
            for (std::int64_t i = 0; i < R; ++i) m += static_cast<double>(sizes[i]);
            return m / static_cast<double>(R);
        };
        res[ni] = {pl, sel, pc, sec, mean_sz(size_lit), mean_sz(size_corr)};
        out.rows.push_back({"literal", fmt_i(n), format_double(pl), format_double(sel),
                            format_double(res[ni].mean_sz_lit)});
        out.rows.push_back({"corrected", fmt_i(n), format_double(pc), format_double(sec),
                            format_double(res[ni].mean_sz_corr)});
    }

    const setting_result& last = res.back();
    out.reports.push_back(make_report("pair-prob-n" + std::to_string(ns.back()), last.p_lit,
                                      p_tol, static_cast<std::uint64_t>(R), 0, seed));
    if (ns.size() > 1) {
        const setting_result& first = res.front();
        const double se_comb = std::sqrt(first.se_lit * first.se_lit + last.se_lit * last.se_lit);
        out.reports.push_back(make_report("pair-prob-trend",
                                          last.p_lit - first.p_lit - 3.0 * se_comb, 0.0,
                                          static_cast<std::uint64_t>(R),
                                          static_cast<std::uint64_t>(R), seed));
    }
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const std::string sn = std::to_string(ns[ni]);
        out.extras["corrected_pair_prob_n" + sn] = res[ni].p_corr;
        out.extras["mean_level_set_literal_n" + sn] = res[ni].mean_sz_lit;
        out.extras["mean_level_set_corrected_n" + sn] = res[ni].mean_sz_corr;
    }
    return out;
}

// ---------------------------------------------------------------------------
// decorations: first-gap law of structured extractions, local-time route vs
// Gaussian route, matched height window.
recipe_out run_decorations(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const int k = static_cast<int>(cfg_int(cfg, "k"));
    if (k < 1 || k > n) throw config_error("k must lie in [1, n]");
    const std::int64_t R_lt = cfg_replicas(cfg, "replicas_lt");
    const std::int64_t R_gff = cfg_replicas(cfg, "replicas_gff");
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double wlo = cfg_num(cfg, "window_lo");
    const double whi = cfg_num(cfg, "window_hi");
    if (!(whi > wlo)) throw config_error("window_hi must exceed window_lo");
    const std::int64_t min_points = cfg_int(cfg, "min_points");
    const double ks_tol = cfg_num(cfg, "ks_tol");
    tree_shape shape(b, n);
    const std::int64_t nl = shape.leaf_count();
    const centering_constants cc = centering(b, n, t);
    const double center_lt = std::sqrt(t) + cc.a_n;
    const double center_gff = cc.m_tilde;
    const std::int64_t prof_len = 2;  // only the first gap is consumed

    std::vector<std::vector<double>> gaps_lt(R_lt), gaps_gff(R_gff);
    run_replicas(static_cast<std::uint64_t>(R_lt), workers, [&](std::uint64_t i) {
        rng_t rl = make_rng(seed, s_field, i);
        const local_time_field L = sample_root_field(shape, t, rl);
        std::vector<double> vals(nl);
        for (std::int64_t l = 0; l < nl; ++l) vals[l] = std::sqrt(L.leaf(l));
        const extremal_sample ex =
            extract_structured(shape, vals, k, center_lt, wlo, prof_len);
        for (const auto& pt : ex.points)
            if (pt.height >= wlo && pt.height <= whi) gaps_lt[i].push_back(pt.profile[1]);
    });
    run_replicas(static_cast<std::uint64_t>(R_gff), workers, [&](std::uint64_t i) {
        rng_t rg = make_rng(seed, s_gff, i);
        const gaussian_field h = sample_gff(shape, rg);
        std::vector<double> vals(nl);
        for (std::int64_t l = 0; l < nl; ++l) vals[l] = h.leaf(l);
        const extremal_sample ex =
            extract_structured(shape, vals, k, center_gff, wlo, prof_len);
        for (const auto& pt : ex.points)
            if (pt.height >= wlo && pt.height <= whi) gaps_gff[i].push_back(pt.profile[1]);
    });

    recipe_out out;
    out.columns = {"route", "replica", "gap"};
    std::vector<double> flat_lt, flat_gff;
    for (std::int64_t i = 0; i < R_lt; ++i)
        for (double g : gaps_lt[i]) {
            flat_lt.push_back(g);
            out.rows.push_back({"lt", fmt_i(i), format_double(g)});
        }
    for (std::int64_t i = 0; i < R_gff; ++i)
        for (double g : gaps_gff[i]) {
            flat_gff.push_back(g);
            out.rows.push_back({"gff", fmt_i(i), format_double(g)});
        }

    const std::uint64_t n_lt = flat_lt.size(), n_gff = flat_gff.size();
    out.reports.push_back(make_report(
        "points-lt", static_cast<double>(min_points) - static_cast<double>(n_lt), 0.0, n_lt, 0,
        seed));
    out.reports.push_back(make_report(
        "points-gff", static_cast<double>(min_points) - static_cast<double>(n_gff), 0.0, n_gff, 0,
        seed));
    double ks = 1e308;
    if (!flat_lt.empty() && !flat_gff.empty()) ks = ks_stat(flat_lt, flat_gff);
    out.reports.push_back(make_report("first-gap-ks", ks, ks_tol, n_lt, n_gff, seed));
    return out;
}

// ---------------------------------------------------------------------------
// mass-law: max-CDF against the Laplace mixture of intensity masses, one
// fitted scale at the anchor.
recipe_out run_mass_law(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::vector<std::int64_t> ns = cfg_int_list(cfg, "ns");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    const double u_anchor = cfg_num(cfg, "u_anchor");
    const std::vector<double> u_checks = cfg_num_list(cfg, "u_checks");
    const double disc_tol = cfg_num(cfg, "disc_tol");
    const double trend_allow = cfg_num(cfg, "trend_allow");
    const double C = cfg_num(cfg, "intensity_C");
    const double slb = std::sqrt(std::log(static_cast<double>(b)));

    struct setting {
        std::map<double, double> disc_lit;   // u -> |mixture - empirical|, literal centering
        std::map<double, double> disc_corr;  // corrected centering
        double kappa_lit = 0.0, kappa_corr = 0.0;
    };
    std::vector<setting> res(ns.size());

    recipe_out out;
    out.columns = {"centering", "n", "u", "empirical", "mixture", "kappa"};

    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const int n = static_cast<int>(ns[ni]);
        tree_shape shape(b, n);
        const std::int64_t nl = shape.leaf_count();
        const centering_constants cc = centering(b, n, t);

        std::vector<double> M(R), Z(R);
        run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
            rng_t rl = make_rng(seed, salted(s_field, static_cast<std::uint64_t>(n)), i);
            const local_time_field L = sample_root_field(shape, t, rl);
            double mx = 0.0;
            for (std::int64_t l = 0; l < nl; ++l) mx = std::max(mx, L.leaf(l));
            M[i] = std::sqrt(mx);
            Z[i] = intensity_estimate(L, intensity_mode::root, 1, C).total;
        });

        const auto empirical = [&](double cut) {
            std::int64_t c = 0;
            for (std::int64_t i = 0; i < R; ++i)
                if (M[i] <= cut) ++c;
            return static_cast<double>(c) / static_cast<double>(R);
        };
        const auto mixture = [&](double kappa, double u) {
            const double rate = kappa * std::exp(-2.0 * u * slb);
            double acc = 0.0;
            for (std::int64_t i = 0; i < R; ++i) acc += std::exp(-rate * Z[i]);
            return acc / static_cast<double>(R);
        };
        // Monotone-decreasing in kappa; bisect on log10 kappa, clamped.
        const auto fit_kappa = [&](double target, double u) {
            double lo = -12.0, hi = 15.0;
            if (mixture(std::pow(10.0, lo), u) <= target) return std::pow(10.0, lo);
            if (mixture(std::pow(10.0, hi), u) >= target) return std::pow(10.0, hi);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mixture(std::pow(10.0, mid), u) > target)
                    lo = mid;
                else
                    hi = mid;
            }
            return std::pow(10.0, 0.5 * (lo + hi));
        };

        for (int kind = 0; kind < 2; ++kind) {
            const double center = kind == 0 ? cc.m_n : std::sqrt(t) + cc.a_n;
            const char* kname = kind == 0 ? "literal" : "corrected";
            const double kappa = fit_kappa(empirical(center + u_anchor), u_anchor);
            std::vector<double> us = {u_anchor};
            us.insert(us.end(), u_checks.begin(), u_checks.end());
            std::sort(us.begin(), us.end());
            for (double u : us) {
                const double emp = empirical(center + u);
                const double mix = mixture(kappa, u);
                out.rows.push_back({kname, fmt_i(n), format_double(u), format_double(emp),
                                    format_double(mix), format_double(kappa)});
                if (u != u_anchor) {
                    const double d = std::fabs(mix - emp);
                    if (kind == 0) {
                        res[ni].disc_lit[u] = d;
                    } else {
                        res[ni].disc_corr[u] = d;
                    }
                }
            }
            if (kind == 0)
                res[ni].kappa_lit = kappa;
            else
                res[ni].kappa_corr = kappa;
        }
    }

    const std::size_t last = ns.size() - 1;
    for (const auto& [u, d] : res[last].disc_lit) {
        out.reports.push_back(make_report("disc-u" + format_double(u) + "-n" +
                                          std::to_string(ns[last]),
                                          d, disc_tol, static_cast<std::uint64_t>(R), 0, seed));
    }
    if (ns.size() > 1) {
        for (const auto& [u, d] : res[last].disc_lit) {
            const double d0 = res[0].disc_lit.at(u);
            out.reports.push_back(make_report("disc-trend-u" + format_double(u), d - d0,
                                              trend_allow, static_cast<std::uint64_t>(R),
                                              static_cast<std::uint64_t>(R), seed));
        }
    }
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        out.extras["kappa_literal_n" + std::to_string(ns[ni])] = res[ni].kappa_lit;
        out.extras["kappa_corrected_n" + std::to_string(ns[ni])] = res[ni].kappa_corr;
        for (const auto& [u, d] : res[ni].disc_corr)
            out.extras["disc_corrected_u" + format_double(u) + "_n" + std::to_string(ns[ni])] = d;
    }
    return out;
}

// ---------------------------------------------------------------------------
// ballot-sweep: bracket check against 4ru/k, homogeneous-barrier check against
// the reflection formula (bridge-corrected estimate), profile diagnostic.
recipe_out run_ballot_sweep(const json& cfg) {
    const std::uint64_t seed = cfg_seed(cfg);
    const std::int64_t bk = cfg_int(cfg, "bracket_k");
    const double br = cfg_num(cfg, "bracket_r");
    const double bu = cfg_num(cfg, "bracket_u");
    const std::int64_t bN = cfg_replicas(cfg, "bracket_N");
    const std::int64_t hk = cfg_int(cfg, "homog_k");
    const double hr = cfg_num(cfg, "homog_r");
    const double hu = cfg_num(cfg, "homog_u");
    const std::int64_t hN = cfg_replicas(cfg, "homog_N");
    const double a = cfg_num(cfg, "a");
    const double sigma = cfg_num(cfg, "sigma");
    const std::int64_t pN = cfg_replicas(cfg, "profile_N");
    const double bracket_tol = cfg_num(cfg, "bracket_tol");
    const double homog_allow = cfg_num(cfg, "homog_allow");
    if (bk < 2 || hk < 2) throw config_error("bracket_k and homog_k must be >= 2");

    recipe_out out;
    out.columns = {"kind", "k", "r", "u", "N", "p", "se", "p_bridge", "se_bridge", "reference"};

    rng_t r0 = make_rng(seed, s_path, 0);
    const ballot_estimate eb =
        ballot_mc(static_cast<int>(bk), br, bu, 0.0, static_cast<std::uint64_t>(bN), r0, false);
    const double asym = ballot_asymptotic(static_cast<double>(bk), br, bu);
    out.rows.push_back({"bracket", fmt_i(bk), format_double(br), format_double(bu), fmt_i(bN),
                        format_double(eb.p), format_double(eb.se), format_double(0.0),
                        format_double(0.0), format_double(asym)});

    rng_t r1 = make_rng(seed, s_path, 1);
    const ballot_estimate eh =
        ballot_mc(static_cast<int>(hk), hr, hu, 0.0, static_cast<std::uint64_t>(hN), r1, true);
    const double refl = reflection_formula(static_cast<double>(hk), hr, hu);
    out.rows.push_back({"homog", fmt_i(hk), format_double(hr), format_double(hu), fmt_i(hN),
                        format_double(eh.p), format_double(eh.se), format_double(eh.p_bridge),
                        format_double(eh.se_bridge), format_double(refl)});

    rng_t r2 = make_rng(seed, s_path, 2);
    const barrier_profile prof(static_cast<int>(bk), a, sigma);
    const ballot_estimate ep =
        ballot_mc(static_cast<int>(bk), br, bu, prof, static_cast<std::uint64_t>(pN), r2);
    out.rows.push_back({"profile", fmt_i(bk), format_double(br), format_double(bu), fmt_i(pN),
                        format_double(ep.p), format_double(ep.se), format_double(0.0),
                        format_double(0.0), format_double(asym)});

    out.reports.push_back(make_report("bracket-rel-err", std::fabs(eb.p / asym - 1.0), bracket_tol,
                                      static_cast<std::uint64_t>(bN), 0, seed));
    out.reports.push_back(make_report("homog-dev",
                                      std::fabs(eh.p_bridge - refl) - 3.0 * eh.se_bridge,
                                      homog_allow, static_cast<std::uint64_t>(hN), 0, seed));
    out.extras["grid_estimate_homog"] = eh.p;
    out.extras["grid_se_homog"] = eh.se;
    out.extras["reflection_reference"] = refl;
    out.extras["profile_estimate"] = ep.p;
    return out;
}

// ---------------------------------------------------------------------------
// q-scaling: barrier-product masses from simulated and extended CDF curves;
// estimate * n / u confined to a fixed band.
recipe_out run_q_scaling(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int kmax = static_cast<int>(cfg_int(cfg, "curve_kmax"));
    if (kmax < 1 || kmax > 16) throw config_error("curve_kmax must lie in [1, 16]");
    const std::int64_t curve_R = cfg_replicas(cfg, "curve_replicas");
    const std::int64_t q_R = cfg_replicas(cfg, "q_replicas");
    const std::vector<std::int64_t> ns = cfg_int_list(cfg, "ns");
    const std::vector<double> us = cfg_num_list(cfg, "us");
    const double grid_lo = cfg_num(cfg, "grid_lo");
    const double grid_hi = cfg_num(cfg, "grid_hi");
    const double grid_step = cfg_num(cfg, "grid_step");
    const double band = cfg_num(cfg, "band");
    const std::uint64_t seed = cfg_seed(cfg);
    if (!(grid_hi > grid_lo) || !(grid_step > 0.0)) throw config_error("bad curve grid");

    const int grid_count =
        static_cast<int>(std::floor((grid_hi - grid_lo) / grid_step + 1e-9)) + 1;
    std::vector<double> tgrid(grid_count);
    for (int i = 0; i < grid_count; ++i) tgrid[i] = grid_lo + i * grid_step;

    const std::int64_t n_top = *std::max_element(ns.begin(), ns.end());
    std::vector<cdf_curve> curves;
    for (int k = 1; k <= kmax && k <= n_top; ++k) {
        rng_t rc = make_rng(seed, s_curve, static_cast<std::uint64_t>(k));
        curves.push_back(brw_max_cdf(b, k, tgrid, static_cast<int>(curve_R), rc));
    }
    for (int k = kmax + 1; k <= n_top; ++k)
        curves.push_back(extend_curve(curves[static_cast<std::size_t>(kmax) - 1], k,
                                      centering(b, k).m_tilde));

    recipe_out out;
    out.columns = {"kind", "i", "x", "value", "se", "extra"};
    for (int k = 1; k <= kmax && k <= n_top; ++k) {
        const cdf_curve& c = curves[static_cast<std::size_t>(k) - 1];
        for (std::size_t j = 0; j < c.tgrid.size(); ++j)
            out.rows.push_back({"curve", fmt_i(k), format_double(c.tgrid[j]),
                                format_double(c.p[j]), format_double(c.se[j]), ""});
    }

    double rmin = 1e308, rmax = 0.0;
    std::uint64_t pair_idx = 0;
    for (std::int64_t n : ns) {
        for (double u : us) {
            rng_t rq = make_rng(seed, s_path, pair_idx++);
            const q_mass_result q =
                q_mass_mc(static_cast<int>(n), u, u, curves, static_cast<int>(q_R), rq);
            const double ratio = q.estimate * static_cast<double>(n) / u;
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
            out.rows.push_back({"qmass", fmt_i(n), format_double(u), format_double(q.estimate),
                                format_double(q.se), format_double(ratio)});
        }
    }
    const double stat = (rmin > 0.0) ? rmax / rmin : 1e308;
    out.reports.push_back(make_report("band-ratio", stat, band,
                                      static_cast<std::uint64_t>(q_R),
                                      static_cast<std::uint64_t>(curve_R), seed));
    return out;
}

// ---------------------------------------------------------------------------
// maximizer-scale: location and dyadic scale of the leaf maximizer.
recipe_out run_maximizer_scale(const json& cfg) {
    const int b = static_cast<int>(cfg_int(cfg, "b"));
    const int n = static_cast<int>(cfg_int(cfg, "n"));
    const double t = cfg_num(cfg, "t");
    if (!(t > 0.0)) throw config_error("t must be > 0");
    const std::int64_t R = cfg_replicas(cfg);
    const std::uint64_t seed = cfg_seed(cfg);
    const int workers = cfg_workers(cfg);
    tree_shape shape(b, n);
    const std::int64_t nl = shape.leaf_count();

    std::vector<double> thetas(R);
    std::vector<int> scales(R);  // -1 marks an extinct replica
    run_replicas(static_cast<std::uint64_t>(R), workers, [&](std::uint64_t i) {
        rng_t rl = make_rng(seed, s_field, i);
        const local_time_field L = sample_root_field(shape, t, rl);
        std::vector<double> vals(nl);
        for (std::int64_t l = 0; l < nl; ++l) vals[l] = L.leaf(l);
        try {
            const maximizer_loc loc = maximizer_location(shape, vals, true);
            thetas[i] = loc.theta;
            scales[i] = loc.has_scale ? loc.scale : n;  // theta = 0 binned past the end
        } catch (const std::domain_error&) {
            thetas[i] = -1.0;
            scales[i] = -1;
        }
    });

    recipe_out out;
    out.columns = {"replica", "theta", "scale"};
    std::int64_t extinct = 0, bad = 0;
    for (std::int64_t i = 0; i < R; ++i) {
        if (scales[i] < 0)
            ++extinct;
        else if (scales[i] > n)
            ++bad;
        out.rows.push_back({fmt_i(i), format_double(thetas[i]), fmt_i(scales[i])});
    }
    out.reports.push_back(make_report("scale-range-violations", static_cast<double>(bad), 0.0,
                                      static_cast<std::uint64_t>(R), 0, seed));
    out.extras["extinct_replicas"] = extinct;
    return out;
}

json report_json(const test_report& r) {
    return json{{"name", r.name},        {"statistic", r.statistic}, {"threshold", r.threshold},
                {"pass", r.pass},        {"n_a", r.n_a},             {"n_b", r.n_b},
                {"seed", r.seed}};
}

}  // namespace

bool experiment_result::all_pass() const {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "coupling-identity", "sampler-equivalence", "leafstart-law", "signlaw-enum",
        "max-tail",          "clustering",          "decorations",   "mass-law",
        "ballot-sweep",      "q-scaling",           "maximizer-scale"};
    return names;
}

nlohmann::json default_config(const std::string& experiment) {
    json d{{"seed", 1}, {"workers", 1}, {"outdir", ""}};
    if (experiment == "coupling-identity") {
        d.update({{"b", 2},
                  {"n", 8},
                  {"t", 4.0},
                  {"k", 0},
                  {"replicas", 1000},
                  {"tol", 1e-9},
                  {"law_checks", false},
                  {"ks_tol", 0.02},
                  {"cov_tol", 0.03}});
    } else if (experiment == "signlaw-enum") {
        d.update({{"trials", 100}, {"draws", 1000000}, {"tv_tol", 0.01}});
    } else if (experiment == "sampler-equivalence") {
        d.update({{"b", 2},
                  {"n", 4},
                  {"t", 3.0},
                  {"replicas", 100000},
                  {"ks_tol", 0.02},
                  {"cov_z_tol", 3.0}});
    } else if (experiment == "leafstart-law") {
        d.update({{"b", 3},
                  {"n", 6},
                  {"replicas", 100000},
                  {"depths", json::array({1, 3, 6})},
                  {"ks_tol", 0.02},
                  {"support_only", false}});
    } else if (experiment == "max-tail") {
        d.update({{"b", 2},
                  {"n", 14},
                  {"t", 5.0},
                  {"replicas", 100000},
                  {"u1", 1.0},
                  {"u2", 2.5},
                  {"points", 12},
                  {"slope_tol", 0.15}});
    } else if (experiment == "clustering") {
        d.update({{"b", 2},
                  {"t", 5.0},
                  {"ns", json::array({10, 14})},
                  {"lambda", 1.0},
                  {"replicas", 10000},
                  {"p_tol", 0.05}});
    } else if (experiment == "decorations") {
        d.update({{"b", 2},
                  {"n", 14},
                  {"t", 5.0},
                  {"k", 4},
                  {"replicas_lt", 2000},
                  {"replicas_gff", 2000},
                  {"window_lo", -1.5},
                  {"window_hi", 1.5},
                  {"min_points", 3000},
                  {"ks_tol", 0.05}});
    } else if (experiment == "mass-law") {
        d.update({{"b", 2},
                  {"t", 5.0},
                  {"ns", json::array({10, 14})},
                  {"replicas", 10000},
                  {"u_anchor", 1.0},
                  {"u_checks", json::array({0.5, 1.5})},
                  {"disc_tol", 0.1},
                  {"trend_allow", 0.015},
                  {"intensity_C", 1.0}});
    } else if (experiment == "ballot-sweep") {
        d.update({{"bracket_k", 10000},
                  {"bracket_r", 20.0},
                  {"bracket_u", 20.0},
                  {"bracket_N", 1000000},
                  {"homog_k", 400},
                  {"homog_r", 3.0},
                  {"homog_u", 3.0},
                  {"homog_N", 1000000},
                  {"a", 10.0},
                  {"sigma", 0.08},
                  {"profile_N", 200000},
                  {"bracket_tol", 0.1},
                  {"homog_allow", 0.01}});
    } else if (experiment == "q-scaling") {
        d.update({{"b", 2},
                  {"curve_kmax", 12},
                  {"curve_replicas", 50000},
                  {"q_replicas", 200000},
                  {"ns", json::array({64, 128})},
                  {"us", json::array({4.0, 8.0})},
                  {"grid_lo", -8.0},
                  {"grid_hi", 44.0},
                  {"grid_step", 0.25},
                  {"band", 4.0}});
    } else if (experiment == "maximizer-scale") {
        d.update({{"b", 2}, {"n", 10}, {"t", 1.0}, {"replicas", 20000}});
    } else {
        throw config_error("unknown experiment: " + experiment);
    }
    return d;
}

experiment_result run_experiment(const std::string& experiment, nlohmann::json cfg) {
    const json defaults = default_config(experiment);
    if (!cfg.is_object()) throw config_error("config must be a JSON object");
    for (const auto& [key, val] : cfg.items()) {
        (void)val;
        if (!defaults.contains(key))
            throw config_error("unknown config key '" + key + "' for " + experiment);
    }
    for (const auto& [key, val] : defaults.items())
        if (!cfg.contains(key)) cfg[key] = val;

    const auto t0 = std::chrono::steady_clock::now();
    recipe_out r;
    if (experiment == "coupling-identity") {
        r = run_coupling_identity(cfg);
    } else if (experiment == "signlaw-enum") {
        r = run_signlaw_enum(cfg);
    } else if (experiment == "sampler-equivalence") {
        r = run_sampler_equivalence(cfg);
    } else if (experiment == "leafstart-law") {
        r = run_leafstart_law(cfg);
    } else if (experiment == "max-tail") {
        r = run_max_tail(cfg);
    } else if (experiment == "clustering") {
        r = run_clustering(cfg);
    } else if (experiment == "decorations") {
        r = run_decorations(cfg);
    } else if (experiment == "mass-law") {
        r = run_mass_law(cfg);
    } else if (experiment == "ballot-sweep") {
        r = run_ballot_sweep(cfg);
    } else if (experiment == "q-scaling") {
        r = run_q_scaling(cfg);
    } else if (experiment == "maximizer-scale") {
        r = run_maximizer_scale(cfg);
    }
    const auto t1 = std::chrono::steady_clock::now();

    experiment_result res;
    res.experiment = experiment;
    res.config = cfg;
    res.reports = std::move(r.reports);
    res.columns = std::move(r.columns);
    res.rows = std::move(r.rows);
    res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

    const std::string outdir = cfg_str(cfg, "outdir");
    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        const std::string stem = experiment + "-" + std::to_string(cfg_seed(cfg));
        res.csv_path = outdir + "/" + stem + ".csv";
        res.meta_path = outdir + "/" + stem + ".meta.json";

        // Worker count and output directory never change results, so they stay
        // out of the echoed config; CSV payloads are byte-stable across
        // schedules and destinations. Workers and the csv path are still
        // recorded at the meta top level.
        json pub = cfg;
        pub.erase("workers");
        pub.erase("outdir");

        csv_writer csv(res.csv_path);
        csv.meta_line("experiment", experiment);
        csv.meta_line("build", build_id);
        csv.meta_line("seed", std::to_string(cfg_seed(cfg)));
        csv.meta_line("config", pub.dump());
        csv.header(res.columns);
        for (const auto& row : res.rows) csv.row(row);

        json meta{{"experiment", experiment},
                  {"build", build_id},
                  {"config", pub},
                  {"workers", cfg_workers(cfg)},
                  {"csv", res.csv_path},
                  {"wall_seconds", res.wall_seconds},
                  {"reports", json::array()},
                  {"extras", r.extras}};
        for (const auto& rep : res.reports) meta["reports"].push_back(report_json(rep));
        write_json(res.meta_path, meta);
    }
    return res;
}

}  // namespace treelocal
