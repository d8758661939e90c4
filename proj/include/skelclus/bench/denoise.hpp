#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "../core.hpp"
#include "../parallel.hpp"
#include "generators.hpp"

namespace skelclus::bench {

/// Distance from every observation to its ceil(sqrt(n))-th nearest other
/// observation. Larger means lower kNN density.
inline std::vector<double> knn_radius(const DataMatrix& data, std::size_t threads = 1) {
    const std::size_t n = data.rows();
    if (n < 2) return std::vector<double>(n, 0.0);
    const auto m = std::min<std::size_t>(
        n - 1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<double> d2;
        d2.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d2.push_back(squared_dist(data.row(i), data.row(j)));
        std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(m - 1), d2.end());
        out[i] = std::sqrt(d2[m - 1]);
    });
    return out;
}

/// Number of observations knn_density_denoise drops: ceil(frac * n), with a
/// little slack so that e.g. frac = 1/n removes exactly one point.
inline std::size_t denoise_count(std::size_t n, double frac) {
    const double x = frac * static_cast<double>(n);
    return std::min(n, static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x))));
}

/// Indices (ascending) kept after dropping the ceil(frac * n) observations
/// with the lowest sqrt(n)-NN density; ties drop the higher index first.
inline std::vector<std::size_t> knn_density_keep(const DataMatrix& data, double frac,
                                                 std::size_t threads = 1) {
    if (!(frac >= 0.0 && frac < 1.0)) throw UsageError("denoise fraction must lie in [0, 1)");
    const std::size_t n = data.rows();
    const std::size_t drop = denoise_count(n, frac);
    std::vector<std::size_t> keep(n);
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    if (drop == 0) return keep;

    const std::vector<double> radius = knn_radius(data, threads);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return radius[a] > radius[b] || (radius[a] == radius[b] && a > b);
    });
    std::vector<char> dropped(n, 0);
    for (std::size_t r = 0; r < drop; ++r) dropped[order[r]] = 1;
    keep.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (!dropped[i]) keep.push_back(i);
    return keep;
}

inline LabeledDataset subset(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
    const std::size_t d = ds.data.cols();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    std::vector<std::size_t> truth;
    truth.reserve(rows.size());
    for (std::size_t i : rows) {
        const auto r = ds.data.row(i);
        values.insert(values.end(), r.begin(), r.end());
        truth.push_back(ds.truth[i]);
    }
    return {DataMatrix(rows.size(), d, std::move(values)), std::move(truth), ds.noise_label};
}

inline LabeledDataset knn_density_denoise(const LabeledDataset& ds, double frac, std::size_t threads = 1) {
    return subset(ds, knn_density_keep(ds.data, frac, threads));
}

}  // namespace skelclus::bench
