#pragma once

// Shared fixtures and brute-force reference implementations. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <skelclus/core.hpp>
#include <skelclus/random.hpp>

namespace testing_support {

using skelclus::DataMatrix;
using skelclus::KnotSet;
using skelclus::Rng;
using skelclus::RngSeed;

inline DataMatrix uniform_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double lo = 0.0,
                                 double hi = 1.0) {
    Rng rng(RngSeed{seed});
    std::vector<double> v(n * d);
    for (double& x : v) x = rng.uniform(lo, hi);
    return DataMatrix(n, d, std::move(v));
}

inline double plain_dist2(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

/// Full scan: sort knots by (distance, index) and take the first two.
inline std::pair<std::size_t, std::size_t> brute_two_nearest(const double* x, const std::vector<double>& centers,
                                                             std::size_t d) {
    const std::size_t k = centers.size() / d;
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < k; ++j) all.emplace_back(plain_dist2(x, &centers[j * d], d), j);
    std::sort(all.begin(), all.end());
    return {all[0].second, k > 1 ? all[1].second : skelclus::kNoKnot};
}

/// Knot set with brute-force assignments.
inline KnotSet brute_knot_set(const DataMatrix& data, std::vector<double> centers) {
    KnotSet ks;
    ks.dim = data.cols();
    ks.centers = std::move(centers);
    ks.sizes.assign(ks.count(), 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto [a, b] = brute_two_nearest(data.row(i).data(), ks.centers, ks.dim);
        ks.assign1.push_back(a);
        ks.assign2.push_back(b);
        ++ks.sizes[a];
    }
    return ks;
}

/// Pick k distinct rows as centers.
inline std::vector<double> rows_as_centers(const DataMatrix& data, std::size_t k, std::uint64_t seed) {
    Rng rng(RngSeed{seed});
    std::vector<std::size_t> idx(data.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    std::vector<double> c;
    for (std::size_t i = 0; i < k; ++i) {
        const auto r = data.row(idx[i]);
        c.insert(c.end(), r.begin(), r.end());
    }
    return c;
}

/// Pair-enumeration adjusted Rand index: counts agreeing pairs directly.
inline double pair_enumeration_ari(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j];
            const bool sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
        }
    const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double expected = in_a * in_b / total;
    const double max_index = 0.5 * (in_a + in_b);
    if (max_index == expected) return 1.0;
    return (both - expected) / (max_index - expected);
}

}  // namespace testing_support
