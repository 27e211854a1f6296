#pragma once

#include <cstdint>
#include <vector>

#include "treelocal/local_time.hpp"
#include "treelocal/tree.hpp"

namespace treelocal {

// Leaves with value >= threshold, ascending theta (= ascending leaf index).
std::vector<std::int64_t> level_set(const std::vector<double>& leafvalues, double threshold);

// True iff leaf attains the max over its depth-k leaf ball; ties count.
bool is_k_local_max(const tree_shape& shape, const std::vector<double>& leafvalues,
                    std::int64_t leaf, int k);

struct extremal_point {
    std::int64_t leaf;
    double theta;
    double height;                // value - centering
    std::vector<double> profile;  // canopy-ordered drops, profile[0] = 0
};

struct extremal_sample {
    int b, n, k;
    std::int64_t r;
    double centering;
    std::vector<extremal_point> points;
};

// One point per k-local maximum with centered height >= floor; profile[j] is
// the drop to the leaf at canopy index j, truncated at length r.
extremal_sample extract_structured(const tree_shape& shape, const std::vector<double>& leafvalues,
                                   int k, double centering, double floor_height, std::int64_t r);

double default_floor(int n);  // -(5 + log n)

struct weighted_measure {
    std::vector<std::pair<double, double>> atoms;  // (location in [0,1), mass > 0)
    double total = 0.0;
};

enum class intensity_mode { leafstart, root, subtree };

// Weighted sums approximating the extremal intensity. leafstart/root modes
// place an atom at theta(x) per leaf with mass
//   C b^{-2n} (n sqrt(log b) - sqrt(v))_+ v^{1/4} exp(2 sqrt(log b) sqrt(v)),
// subtree mode places atoms at level-k vertices with the w_k weight
//   C b^{-2k} (sqrt(log b) k - sqrt(v) - log(v max 1)/(8 sqrt(log b)))_+
//     (v max 1)^{1/4} exp(2 sqrt(log b) sqrt(v)).
weighted_measure intensity_estimate(const local_time_field& field, intensity_mode mode, int k,
                                    double C);

struct maximizer_loc {
    double theta;
    int scale = -1;        // j with theta in [b^{-j-1}, b^{-j})
    bool has_scale = false;  // false only for theta == 0
};

// Argmax leaf (ties toward smallest theta) and its dyadic scale index.
// Local-time fields with no strictly positive leaf have no maximizer.
maximizer_loc maximizer_location(const tree_shape& shape, const std::vector<double>& leafvalues,
                                 bool is_local_time);

// Max minus second max over the depth-k ball at leaf x.
double gap_statistic(const tree_shape& shape, const std::vector<double>& leafvalues,
                     std::int64_t leaf, int k);

}  // namespace treelocal
