#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "../core.hpp"

namespace skelclus::bench {

namespace detail {

inline std::uint64_t choose2(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

}  // namespace detail

/// Hubert-Arabie adjusted Rand index with exact integer pair counts. When
/// the expected and maximum index coincide (both partitions trivial) the
/// partitions are treated as identical and 1 is returned.
template <typename A, typename B>
double adjusted_rand_index(std::span<const A> a, std::span<const B> b) {
    if (a.size() != b.size())
        throw UsageError("label vectors differ in length: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    std::map<A, std::uint64_t> rows;
    std::map<B, std::uint64_t> cols;
    std::map<std::pair<A, B>, std::uint64_t> cells;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++rows[a[i]];
        ++cols[b[i]];
        ++cells[{a[i], b[i]}];
    }
    std::uint64_t index = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, c] : cells) index += detail::choose2(c);
    for (const auto& [key, c] : rows) sum_a += detail::choose2(c);
    for (const auto& [key, c] : cols) sum_b += detail::choose2(c);
    const std::uint64_t total = detail::choose2(a.size());
    if (total == 0) return 1.0;

    // All quantities scaled by 2 * total to stay in integers:
    //   (index - sa*sb/total) / ((sa+sb)/2 - sa*sb/total)
    using wide = __int128;
    const wide prod = static_cast<wide>(sum_a) * sum_b;
    const wide num = 2 * (static_cast<wide>(index) * total - prod);
    const wide den = static_cast<wide>(sum_a + sum_b) * total - 2 * prod;
    if (den == 0) return 1.0;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

template <typename A, typename B>
double adjusted_rand_index(const std::vector<A>& a, const std::vector<B>& b) {
    return adjusted_rand_index(std::span<const A>(a), std::span<const B>(b));
}

}  // namespace skelclus::bench
