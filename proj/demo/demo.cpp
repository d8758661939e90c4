// Clusters a 100-dimensional Yinyang sample with each edge weight and prints
// the adjusted Rand index against the generating components.

#include <cstdio>

#include <skelclus/bench/generators.hpp>
#include <skelclus/bench/metrics.hpp>
#include <skelclus/pipeline.hpp>

int main() {
    using namespace skelclus;
    const auto ds = bench::gen_yinyang(100, RngSeed{7});

    KMeansConfig km;
    km.restarts = 10;
    km.seed = RngSeed{7};
    const KMeansResult knots = kmeans(ds.data, km);
    std::printf("n=%zu d=%zu k=%zu\n", ds.size(), ds.data.cols(), knots.knots.count());

    for (WeightKind w : {WeightKind::voronoi, WeightKind::face, WeightKind::tube, WeightKind::avgdist}) {
        const SkeletonGraph g = build_skeleton(ds.data, knots.knots, w, {});
        const Segmentation s = segment_skeleton(g, LinkageKind::single, 5);
        std::printf("%-8s edges=%zu ari=%.4f\n", std::string(to_string(w)).c_str(), g.edges.size(),
                    bench::adjusted_rand_index(ds.truth, s.result.labels));
    }
}
