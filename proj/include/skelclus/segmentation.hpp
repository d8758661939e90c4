#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "skeleton.hpp"

namespace skelclus {

/// Knot pairs without an edge (or with zero weight) sit at this multiple of
/// the largest finite distance. A fixed astronomic value would make an
/// average-linkage score nothing but the share of non-adjacent pairs.
inline constexpr double kDisconnectedFactor = 2.0;

/// Distance for non-adjacent pairs given the largest finite one: strictly
/// greater, finite, and 1 when there is no finite distance at all.
inline double disconnected_distance(double max_finite) {
    if (!(max_finite > 0.0)) return 1.0;
    const double d = kDisconnectedFactor * max_finite;
    return std::isfinite(d) ? d : std::nextafter(max_finite, std::numeric_limits<double>::infinity());
}

enum class LinkageKind { single, average, complete };

inline std::string_view to_string(LinkageKind l) {
    switch (l) {
        case LinkageKind::single: return "single";
        case LinkageKind::average: return "average";
        case LinkageKind::complete: return "complete";
    }
    return "?";
}

inline LinkageKind parse_linkage_kind(std::string_view s) {
    if (s == "single") return LinkageKind::single;
    if (s == "average") return LinkageKind::average;
    if (s == "complete") return LinkageKind::complete;
    throw UsageError("unknown linkage '" + std::string(s) + "' (expected single, average or complete)");
}

/// Upper triangle of a symmetric k x k matrix, row by row.
class CondensedMatrix {
public:
    CondensedMatrix(std::size_t k, double fill) : k_(k), v_(k < 2 ? 0 : k * (k - 1) / 2, fill) {}

    std::size_t size() const noexcept { return k_; }
    double& at(std::size_t i, std::size_t j) noexcept { return v_[index(i, j)]; }
    double at(std::size_t i, std::size_t j) const noexcept { return v_[index(i, j)]; }
    const std::vector<double>& values() const noexcept { return v_; }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        if (i > j) std::swap(i, j);
        return k_ * i - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t k_;
    std::vector<double> v_;
};

/// distance = 1 / weight for edges with positive weight (and a finite
/// inverse); every other pair gets disconnected_distance of the largest.
inline CondensedMatrix similarity_to_distance(std::size_t knot_count, const EdgeList& edges,
                                              const std::vector<double>& weights) {
    if (weights.size() != edges.size()) throw UsageError("one weight per edge required");
    constexpr double absent = -1.0;
    CondensedMatrix dist(knot_count, absent);
    double max_finite = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [j, l] = edges.pairs[e];
        if (j >= knot_count || l >= knot_count || j == l) throw UsageError("edge out of range");
        const double w = weights[e];
        if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("edge weights must be finite and >= 0");
        const double inv = 1.0 / w;
        if (w > 0.0 && std::isfinite(inv)) {
            dist.at(j, l) = inv;
            max_finite = std::max(max_finite, inv);
        }
    }
    const double far = disconnected_distance(max_finite);
    for (std::size_t i = 0; i < knot_count; ++i)
        for (std::size_t j = i + 1; j < knot_count; ++j)
            if (dist.at(i, j) == absent) dist.at(i, j) = far;
    return dist;
}

struct Merge {
    std::size_t a = 0;  // cluster ids: 0..k-1 are knots, k+i is the cluster made by merge i
    std::size_t b = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;  // k - 1 entries, heights nondecreasing
    LinkageKind linkage = LinkageKind::single;
};

/// Agglomerative clustering by the nearest-neighbour chain with Lance-Williams
/// updates; O(k^2) time for the reducible linkages offered here. Merges are
/// reported in height order (stable with respect to chain order).
inline Dendrogram hierarchical_cluster(const CondensedMatrix& distances, LinkageKind linkage) {
    const std::size_t k = distances.size();
    Dendrogram out;
    out.leaves = k;
    out.linkage = linkage;
    if (k < 2) return out;

    // Full working copy; slot s holds the cluster whose smallest knot is s.
    std::vector<double> d(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) d[i * k + j] = d[j * k + i] = distances.at(i, j);
    std::vector<std::size_t> size(k, 1);
    std::vector<char> active(k, 1);

    struct SlotMerge {
        std::size_t a, b;
        double height;
    };
    std::vector<SlotMerge> raw;
    raw.reserve(k - 1);
    std::vector<std::size_t> chain;
    chain.reserve(k);

    for (std::size_t remaining = k; remaining > 1; --remaining) {
        if (chain.empty()) {
            std::size_t first = 0;
            while (!active[first]) ++first;
            chain.push_back(first);
        }
        std::size_t a, b;
        for (;;) {
            a = chain.back();
            const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : k;
            b = prev;
            double best = prev < k ? d[a * k + prev] : std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                if (!active[c] || c == a) continue;
                const double v = d[a * k + c];
                // The chain predecessor wins ties; otherwise the lowest index.
                if (v < best || (v == best && c < b && b != prev)) {
                    best = v;
                    b = c;
                }
            }
            if (b == prev) break;
            chain.push_back(b);
        }
        chain.pop_back();
        chain.pop_back();

        const std::size_t keep = std::min(a, b);
        const std::size_t drop = std::max(a, b);
        raw.push_back({keep, drop, d[a * k + b]});
        const double na = static_cast<double>(size[keep]);
        const double nb = static_cast<double>(size[drop]);
        for (std::size_t c = 0; c < k; ++c) {
            if (!active[c] || c == keep || c == drop) continue;
            const double x = d[keep * k + c];
            const double y = d[drop * k + c];
            double v = 0.0;
            switch (linkage) {
                case LinkageKind::single: v = std::min(x, y); break;
                case LinkageKind::complete: v = std::max(x, y); break;
                case LinkageKind::average: v = (na * x + nb * y) / (na + nb); break;
            }
            d[keep * k + c] = d[c * k + keep] = v;
        }
        size[keep] += size[drop];
        active[drop] = 0;
    }

    std::stable_sort(raw.begin(), raw.end(),
                     [](const SlotMerge& x, const SlotMerge& y) { return x.height < y.height; });

    // Translate slots (smallest member knot) into cluster ids.
    std::vector<std::size_t> parent(k), cluster_id(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::iota(cluster_id.begin(), cluster_id.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    out.merges.reserve(k - 1);
    for (std::size_t m = 0; m < raw.size(); ++m) {
        const std::size_t ra = find(raw[m].a);
        const std::size_t rb = find(raw[m].b);
        const std::size_t ia = cluster_id[ra];
        const std::size_t ib = cluster_id[rb];
        out.merges.push_back({std::min(ia, ib), std::max(ia, ib), raw[m].height});
        parent[rb] = ra;
        cluster_id[ra] = k + m;
    }
    return out;
}

/// Undo the last S - 1 merges. Groups are numbered by their smallest knot.
inline std::vector<std::size_t> cut_dendrogram(const Dendrogram& dendro, std::size_t clusters) {
    const std::size_t k = dendro.leaves;
    if (clusters < 1 || clusters > k)
        throw UsageError("cannot cut " + std::to_string(k) + " knots into " + std::to_string(clusters) +
                         " groups");
    if (dendro.merges.size() + 1 != k) throw UsageError("dendrogram is incomplete");

    std::vector<std::size_t> parent(2 * k - 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t m = 0; m + clusters < k; ++m) {
        parent[find(dendro.merges[m].a)] = k + m;
        parent[find(dendro.merges[m].b)] = k + m;
    }
    std::vector<std::size_t> groups(k);
    std::vector<std::size_t> label_of_root(2 * k - 1, kNoKnot);
    std::size_t next = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = find(j);
        if (label_of_root[r] == kNoKnot) label_of_root[r] = next++;
        groups[j] = label_of_root[r];
    }
    return groups;
}

struct ClusteringResult {
    std::vector<std::size_t> labels;       // per observation
    std::vector<std::size_t> knot_groups;  // per knot
    std::size_t clusters = 0;
};

/// Each observation takes the group of its nearest knot.
inline ClusteringResult assign_labels(const std::vector<std::size_t>& knot_groups, const KnotSet& knots) {
    if (knot_groups.size() != knots.count()) throw UsageError("one group per knot required");
    ClusteringResult r;
    r.knot_groups = knot_groups;
    r.clusters = knot_groups.empty() ? 0 : *std::max_element(knot_groups.begin(), knot_groups.end()) + 1;
    r.labels.reserve(knots.assign1.size());
    for (std::size_t a : knots.assign1) r.labels.push_back(knot_groups[a]);
    return r;
}

}  // namespace skelclus
