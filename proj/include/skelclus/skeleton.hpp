#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"

namespace skelclus {

using Edge = std::pair<std::size_t, std::size_t>;  // (j, l) with j < l

/// Edges of the approximate Delaunay graph, sorted and unique, each with the
/// number of observations whose two nearest knots are exactly that pair.
struct EdgeList {
    std::vector<Edge> pairs;
    std::vector<std::size_t> evidence;

    std::size_t size() const noexcept { return pairs.size(); }

    /// Position of (j, l) in the sorted list, or size() if absent.
    std::size_t find(std::size_t j, std::size_t l) const noexcept {
        if (j > l) std::swap(j, l);
        const auto it = std::lower_bound(pairs.begin(), pairs.end(), Edge{j, l});
        if (it == pairs.end() || *it != Edge{j, l}) return pairs.size();
        return static_cast<std::size_t>(it - pairs.begin());
    }
};

/// Approximate Delaunay triangulation from 2-NN witnesses: knots j and l are
/// joined iff some observation has {j, l} as its two nearest knots.
inline EdgeList approx_delaunay(const KnotSet& knots) {
    const std::size_t k = knots.count();
    if (k < 2) throw UsageError("approximate Delaunay needs at least two knots");
    if (knots.assign2.size() != knots.assign1.size())
        throw UsageError("knot set is missing second-nearest assignments");

    std::vector<std::uint64_t> keys;
    keys.reserve(knots.assign1.size());
    for (std::size_t i = 0; i < knots.assign1.size(); ++i) {
        std::size_t a = knots.assign1[i];
        std::size_t b = knots.assign2[i];
        if (a == b || a >= k || b >= k) throw UsageError("invalid 2-NN assignment");
        if (a > b) std::swap(a, b);
        keys.push_back(static_cast<std::uint64_t>(a) * k + b);
    }
    std::sort(keys.begin(), keys.end());

    EdgeList out;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t run = i;
        while (run < keys.size() && keys[run] == keys[i]) ++run;
        out.pairs.emplace_back(static_cast<std::size_t>(keys[i] / k),
                               static_cast<std::size_t>(keys[i] % k));
        out.evidence.push_back(run - i);
        i = run;
    }
    return out;
}

enum class WeightKind { voronoi, face, tube, avgdist };

inline std::string_view to_string(WeightKind w) {
    switch (w) {
        case WeightKind::voronoi: return "voronoi";
        case WeightKind::face: return "face";
        case WeightKind::tube: return "tube";
        case WeightKind::avgdist: return "avgdist";
    }
    return "?";
}

inline WeightKind parse_weight_kind(std::string_view s) {
    if (s == "voronoi" || s == "vd") return WeightKind::voronoi;
    if (s == "face" || s == "fd") return WeightKind::face;
    if (s == "tube" || s == "td") return WeightKind::tube;
    if (s == "avgdist" || s == "ad") return WeightKind::avgdist;
    throw UsageError("unknown weight kind '" + std::string(s) +
                     "' (expected voronoi, face, tube or avgdist)");
}

/// Knots, approximate-Delaunay edges and one similarity per edge.
struct SkeletonGraph {
    KnotSet knots;
    EdgeList edges;
    std::vector<double> weights;       // aligned with edges.pairs
    WeightKind weight_kind = WeightKind::voronoi;
    std::vector<std::string> warnings; // per-edge degenerate cases, "j-l: reason"
};

}  // namespace skelclus
