#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include <skelclus/pipeline.hpp>
#include <skelclus/segmentation.hpp>

#include "oracles.hpp"

using namespace skelclus;
using namespace testing_support;

namespace {

CondensedMatrix random_matrix(std::size_t k, std::uint64_t seed) {
    Rng rng(RngSeed{seed});
    CondensedMatrix m(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) m.at(i, j) = rng.uniform(0.1, 10.0);
    return m;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    return true;
}

EdgeList edge_list(std::vector<Edge> pairs) {
    EdgeList e;
    std::sort(pairs.begin(), pairs.end());
    e.pairs = std::move(pairs);
    e.evidence.assign(e.pairs.size(), 1);
    return e;
}

}  // namespace

TEST(Agglomeration, MatchesNaiveOracle) {
    for (auto linkage : {LinkageKind::single, LinkageKind::average, LinkageKind::complete})
        for (std::uint64_t inst = 0; inst < 50; ++inst) {
            const auto dist = random_matrix(12, 1000 + inst);
            const auto dendro = hierarchical_cluster(dist, linkage);
            const auto naive = naive_agglomerate(dist, linkage);
            ASSERT_EQ(dendro.merges.size(), 11u);
            const auto sets = expand(dendro);
            for (std::size_t m = 0; m < 11; ++m) {
                const Members got_a = sets[dendro.merges[m].a], got_b = sets[dendro.merges[m].b];
                const bool match = (got_a == naive[m].a && got_b == naive[m].b) ||
                                   (got_a == naive[m].b && got_b == naive[m].a);
                EXPECT_TRUE(match) << to_string(linkage) << " instance " << inst << " merge " << m;
                EXPECT_NEAR(dendro.merges[m].height, naive[m].height, 1e-12 * naive[m].height);
            }
        }
}

TEST(Agglomeration, SingleLinkageHeightsAreKruskalMst) {
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        const std::size_t k = 20;
        const auto dist = random_matrix(k, 2000 + inst);
        std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) edges.emplace_back(dist.at(i, j), i, j);
        std::sort(edges.begin(), edges.end());
        std::vector<std::size_t> parent(k);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x];
            return x;
        };
        std::vector<double> mst;
        for (const auto& [w, i, j] : edges) {
            const auto a = find(i), b = find(j);
            if (a != b) {
                parent[a] = b;
                mst.push_back(w);
            }
        }
        const auto dendro = hierarchical_cluster(dist, LinkageKind::single);
        ASSERT_EQ(mst.size(), dendro.merges.size());
        for (std::size_t m = 0; m < mst.size(); ++m) EXPECT_EQ(dendro.merges[m].height, mst[m]);
    }
}

TEST(Agglomeration, HeightsNondecreasingAndIdsValid) {
    for (auto linkage : {LinkageKind::single, LinkageKind::average, LinkageKind::complete}) {
        const auto dendro = hierarchical_cluster(random_matrix(30, 7), linkage);
        std::vector<char> used(2 * 30 - 1, 0);
        for (std::size_t m = 0; m < dendro.merges.size(); ++m) {
            const Merge& mg = dendro.merges[m];
            if (m > 0) { EXPECT_LE(dendro.merges[m - 1].height, mg.height); }
            EXPECT_LT(mg.a, mg.b);
            EXPECT_LT(mg.b, 30 + m);
            EXPECT_FALSE(used[mg.a]);
            EXPECT_FALSE(used[mg.b]);
            used[mg.a] = used[mg.b] = 1;
        }
    }
}

TEST(Agglomeration, SingleLinkageCutInvariantUnderMonotoneTransform) {
    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        const auto dist = random_matrix(15, 3000 + inst);
        CondensedMatrix squashed(15, 0.0);
        for (std::size_t i = 0; i < 15; ++i)
            for (std::size_t j = i + 1; j < 15; ++j) squashed.at(i, j) = std::log1p(std::sqrt(dist.at(i, j)));
        const auto a = hierarchical_cluster(dist, LinkageKind::single);
        const auto b = hierarchical_cluster(squashed, LinkageKind::single);
        for (std::size_t S = 1; S <= 15; ++S) EXPECT_EQ(cut_dendrogram(a, S), cut_dendrogram(b, S));
    }
}

TEST(Agglomeration, HandExample) {
    // Points on a line at 0, 1, 5, 6.5.
    CondensedMatrix d(4, 0.0);
    const double x[4] = {0, 1, 5, 6.5};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) d.at(i, j) = std::abs(x[i] - x[j]);
    const auto single = hierarchical_cluster(d, LinkageKind::single);
    ASSERT_EQ(single.merges.size(), 3u);
    EXPECT_EQ(single.merges[0].a, 0u);
    EXPECT_EQ(single.merges[0].b, 1u);
    EXPECT_EQ(single.merges[0].height, 1.0);
    EXPECT_EQ(single.merges[1].a, 2u);
    EXPECT_EQ(single.merges[1].b, 3u);
    EXPECT_EQ(single.merges[1].height, 1.5);
    EXPECT_EQ(single.merges[2].a, 4u);
    EXPECT_EQ(single.merges[2].b, 5u);
    EXPECT_EQ(single.merges[2].height, 4.0);

    EXPECT_EQ(hierarchical_cluster(d, LinkageKind::complete).merges[2].height, 6.5);
    EXPECT_DOUBLE_EQ(hierarchical_cluster(d, LinkageKind::average).merges[2].height, (5 + 6.5 + 4 + 5.5) / 4.0);
}

TEST(Agglomeration, TiesResolveDeterministically) {
    CondensedMatrix d(5, 1.0);  // every pair equally far
    const auto a = hierarchical_cluster(d, LinkageKind::average);
    const auto b = hierarchical_cluster(d, LinkageKind::average);
    ASSERT_EQ(a.merges.size(), 4u);
    for (std::size_t m = 0; m < 4; ++m) {
        EXPECT_EQ(a.merges[m].a, b.merges[m].a);
        EXPECT_EQ(a.merges[m].b, b.merges[m].b);
        EXPECT_EQ(a.merges[m].height, 1.0);
    }
    EXPECT_EQ(a.merges[0].a, 0u);
    EXPECT_EQ(a.merges[0].b, 1u);
}

TEST(Agglomeration, TrivialSizes) {
    EXPECT_TRUE(hierarchical_cluster(CondensedMatrix(1, 0.0), LinkageKind::single).merges.empty());
    const auto one = hierarchical_cluster(CondensedMatrix(2, 3.0), LinkageKind::single);
    ASSERT_EQ(one.merges.size(), 1u);
    EXPECT_EQ(one.merges[0].height, 3.0);
}

// ---------------------------------------------------------------------------
// Cutting

TEST(Cut, RefinesAsClustersGrow) {
    for (auto linkage : {LinkageKind::single, LinkageKind::average, LinkageKind::complete}) {
        const auto dendro = hierarchical_cluster(random_matrix(25, 11), linkage);
        for (std::size_t S = 1; S < 25; ++S) {
            const auto coarse = cut_dendrogram(dendro, S);
            const auto fine = cut_dendrogram(dendro, S + 1);
            EXPECT_EQ(*std::max_element(coarse.begin(), coarse.end()) + 1, S);
            EXPECT_EQ(*std::max_element(fine.begin(), fine.end()) + 1, S + 1);
            for (std::size_t i = 0; i < 25; ++i)
                for (std::size_t j = 0; j < 25; ++j)
                    if (fine[i] == fine[j]) { EXPECT_EQ(coarse[i], coarse[j]); }
        }
    }
}

TEST(Cut, GroupsNumberedByFirstKnot) {
    const auto dendro = hierarchical_cluster(random_matrix(10, 5), LinkageKind::average);
    const auto g = cut_dendrogram(dendro, 4);
    EXPECT_EQ(g[0], 0u);
    std::size_t next = 0;
    for (std::size_t x : g) {
        EXPECT_LE(x, next);
        if (x == next) ++next;
    }
    const auto all = cut_dendrogram(dendro, 10);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(all[j], j);
    EXPECT_THROW(cut_dendrogram(dendro, 0), UsageError);
    EXPECT_THROW(cut_dendrogram(dendro, 11), UsageError);
}

// ---------------------------------------------------------------------------
// Distance conversion

TEST(Distance, InverseWeightsAndScaledSentinel) {
    const auto edges = edge_list({{0, 1}, {1, 2}, {2, 3}});
    const auto d = similarity_to_distance(4, edges, {2.0, 0.5, 0.0});
    EXPECT_EQ(d.at(0, 1), 0.5);
    EXPECT_EQ(d.at(1, 2), 2.0);
    const double far = disconnected_distance(2.0);
    EXPECT_EQ(far, 4.0);
    EXPECT_EQ(d.at(2, 3), far);  // zero weight counts as absent
    EXPECT_EQ(d.at(0, 2), far);
    EXPECT_EQ(d.at(0, 3), far);
    EXPECT_EQ(d.at(1, 3), far);
}

TEST(Distance, SentinelEdgeCases) {
    EXPECT_EQ(disconnected_distance(0.0), 1.0);
    const double big = std::numeric_limits<double>::max();
    EXPECT_GT(disconnected_distance(big), big);
    EXPECT_GT(disconnected_distance(big / 4), big / 4);

    const auto d = similarity_to_distance(3, edge_list({}), {});
    EXPECT_EQ(d.at(0, 1), 1.0);
}

TEST(Distance, RejectsBadWeights) {
    const auto edges = edge_list({{0, 1}});
    EXPECT_THROW(similarity_to_distance(2, edges, {-1.0}), UsageError);
    EXPECT_THROW(similarity_to_distance(2, edges, {std::nan("")}), UsageError);
    EXPECT_THROW(similarity_to_distance(2, edges, {}), UsageError);
    EXPECT_THROW(similarity_to_distance(1, edges, {1.0}), UsageError);
}

TEST(Distance, SentinelExceedsEveryFiniteDistance) {
    Rng rng(RngSeed{4});
    for (int inst = 0; inst < 20; ++inst) {
        std::vector<Edge> pairs;
        std::vector<double> w;
        for (std::size_t j = 0; j < 10; ++j)
            for (std::size_t l = j + 1; l < 10; ++l)
                if (rng.uniform() < 0.3) pairs.emplace_back(j, l);
        const auto edges = edge_list(pairs);
        for (std::size_t e = 0; e < edges.size(); ++e) w.push_back(rng.uniform(0.01, 5.0));
        const auto d = similarity_to_distance(10, edges, w);
        double max_finite = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) max_finite = std::max(max_finite, 1.0 / w[e]);
        for (std::size_t j = 0; j < 10; ++j)
            for (std::size_t l = j + 1; l < 10; ++l)
                if (edges.find(j, l) == edges.size()) { EXPECT_GT(d.at(j, l), max_finite); }
    }
}

// ---------------------------------------------------------------------------
// Segmentation of a skeleton

TEST(SegmentSkeleton, DisconnectedComponentsSeparateFirst) {
    // Two triangles of knots with no edge between them.
    SkeletonGraph g;
    g.knots.dim = 1;
    g.knots.centers = {0, 1, 2, 10, 11, 12};
    g.knots.assign1 = {0, 1, 2, 3, 4, 5, 5};
    g.knots.assign2 = {1, 0, 1, 4, 5, 4, 4};
    g.knots.sizes = {1, 1, 1, 1, 1, 2};
    g.edges = edge_list({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    g.weights = {1, 1, 0.1, 1, 1, 0.1};
    for (auto linkage : {LinkageKind::single, LinkageKind::average, LinkageKind::complete}) {
        const auto s = segment_skeleton(g, linkage, 2);
        EXPECT_EQ(s.result.knot_groups, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
        EXPECT_EQ(s.result.labels, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 1}));
        EXPECT_EQ(s.result.clusters, 2u);
    }
    EXPECT_THROW(segment_skeleton(g, LinkageKind::single, 7), UsageError);
}

TEST(SegmentSkeleton, LabelsFollowNearestKnot) {
    const std::vector<std::size_t> groups{1, 0, 1};
    KnotSet ks;
    ks.dim = 1;
    ks.centers = {0, 1, 2};
    ks.assign1 = {2, 2, 0, 1};
    const auto r = assign_labels(groups, ks);
    EXPECT_EQ(r.labels, (std::vector<std::size_t>{1, 1, 1, 0}));
    EXPECT_THROW(assign_labels({0, 1}, ks), UsageError);
}

TEST(LinkageNames, RoundTrip) {
    for (auto l : {LinkageKind::single, LinkageKind::average, LinkageKind::complete})
        EXPECT_EQ(parse_linkage_kind(to_string(l)), l);
    EXPECT_THROW(parse_linkage_kind("ward"), UsageError);
}

TEST(Pipeline, EndToEndOnSeparatedBlobs) {
    Rng rng(RngSeed{8});
    std::vector<double> v;
    std::vector<std::size_t> truth;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 150; ++i) {
            v.push_back(c * 10.0 + rng.normal(0.0, 0.5));
            v.push_back(rng.normal(0.0, 0.5));
            truth.push_back(c);
        }
    const DataMatrix data(450, 2, v);
    for (auto kind : {WeightKind::voronoi, WeightKind::face, WeightKind::tube, WeightKind::avgdist}) {
        SkeletonClusterConfig cfg;
        cfg.kmeans.restarts = 3;
        cfg.kmeans.seed = RngSeed{2};
        cfg.kmeans.threads = 1;
        cfg.weight = kind;
        cfg.clusters = 3;
        const auto out = skeleton_cluster(data, cfg);
        EXPECT_EQ(out.kmeans.knots.count(), 21u);
        EXPECT_TRUE(same_partition(out.segmentation.result.labels, truth)) << to_string(kind);
    }
}
