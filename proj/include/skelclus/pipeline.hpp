#pragma once

#include <chrono>
#include <cstddef>
#include <utility>

#include "core.hpp"
#include "knots.hpp"
#include "segmentation.hpp"
#include "skeleton.hpp"
#include "weights.hpp"

namespace skelclus {

struct SkeletonClusterConfig {
    KMeansConfig kmeans{};
    WeightKind weight = WeightKind::voronoi;
    WeightParams weight_params{};
    LinkageKind linkage = LinkageKind::single;
    std::size_t clusters = 2;
};

struct Segmentation {
    Dendrogram dendrogram;
    ClusteringResult result;
};

struct SkeletonClusterOutput {
    KMeansResult kmeans;
    SkeletonGraph graph;
    Segmentation segmentation;
    double wall_ms = 0.0;
};

/// Knots segmentation and label assignment for an already weighted skeleton.
inline Segmentation segment_skeleton(const SkeletonGraph& g, LinkageKind linkage, std::size_t clusters) {
    const std::size_t k = g.knots.count();
    if (clusters < 1 || clusters > k)
        throw UsageError("number of clusters must lie in [1, " + std::to_string(k) + "]");
    Segmentation s;
    s.dendrogram = hierarchical_cluster(similarity_to_distance(k, g.edges, g.weights), linkage);
    s.result = assign_labels(cut_dendrogram(s.dendrogram, clusters), g.knots);
    return s;
}

/// Weights edges of given knots with one estimator.
inline SkeletonGraph build_skeleton(const DataMatrix& data, const KnotSet& knots, WeightKind kind,
                                    const WeightParams& params) {
    return weight_skeleton(approx_delaunay(knots), data, knots, kind, params);
}

/// knots -> approximate Delaunay edges -> edge weights -> linkage -> labels.
inline SkeletonClusterOutput skeleton_cluster(const DataMatrix& data, const SkeletonClusterConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    SkeletonClusterOutput out;
    out.kmeans = kmeans(data, cfg.kmeans);
    if (out.kmeans.knots.count() < 2) throw UsageError("skeleton clustering needs at least two knots");
    out.graph = build_skeleton(data, out.kmeans.knots, cfg.weight, cfg.weight_params);
    out.segmentation = segment_skeleton(out.graph, cfg.linkage, cfg.clusters);
    out.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace skelclus
