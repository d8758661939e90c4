#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "../parallel.hpp"
#include "../pipeline.hpp"
#include "denoise.hpp"
#include "generators.hpp"
#include "metrics.hpp"

namespace skelclus::bench {

/// Final cluster count each benchmark is scored at unless overridden.
inline std::size_t default_clusters(Generator g) {
    switch (g) {
        case Generator::yinyang: return 5;
        case Generator::ring: return 2;
        default: return 3;
    }
}

struct ExperimentConfig {
    std::vector<Generator> generators{Generator::yinyang};
    std::vector<std::size_t> dims{2};
    std::vector<WeightKind> methods{WeightKind::voronoi};
    std::vector<LinkageKind> linkages{LinkageKind::single};
    std::vector<std::size_t> clusters;  // empty: default_clusters per generator
    std::size_t repeats = 1;
    std::uint64_t seed = 1;  // repeat r runs with seed + r
    std::size_t k = 0;       // 0: reference rule
    std::size_t restarts = 10;
    std::size_t max_iters = 100;
    double tol = 1e-6;
    double noise_frac = 0.0;    // uniform noise points appended (fraction of n)
    double denoise_frac = 0.0;  // kNN-density denoising before clustering
    WeightParams weight_params{};
    std::size_t threads = 0;

    void validate() const {
        if (generators.empty()) throw UsageError("experiment lists no generators");
        if (dims.empty()) throw UsageError("experiment lists no dimensions");
        if (methods.empty()) throw UsageError("experiment lists no methods");
        if (linkages.empty()) throw UsageError("experiment lists no linkages");
        if (repeats == 0) throw UsageError("experiment needs at least one repeat");
        if (noise_frac < 0.0 || noise_frac > 1.0) throw UsageError("noise fraction must lie in [0, 1]");
        if (denoise_frac < 0.0 || denoise_frac >= 1.0) throw UsageError("denoise fraction must lie in [0, 1)");
        weight_params.bandwidth.validate();
        weight_params.tube.validate();
        for (Generator g : generators)
            for (std::size_t d : dims)
                if (d < min_dim(g))
                    throw UsageError(std::string(to_string(g)) + " needs dimension >= " +
                                     std::to_string(min_dim(g)));
    }
};

struct ReportRow {
    std::uint64_t seed = 0;
    std::string generator;
    std::size_t d = 0;
    std::string method;
    std::string linkage;
    std::size_t k = 0;
    std::size_t S = 0;
    double ari = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
    std::string error;  // empty on success
};

struct SummaryRow {
    std::string generator;
    std::size_t d = 0;
    std::string method;
    std::string linkage;
    std::size_t S = 0;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double median_ari = std::numeric_limits<double>::quiet_NaN();
};

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// ARI over the rows whose truth is not the noise label.
inline double signal_ari(const LabeledDataset& ds, const std::vector<std::size_t>& labels) {
    if (!ds.noise_label) return adjusted_rand_index(ds.truth, labels);
    std::vector<std::size_t> t, p;
    for (std::size_t i = 0; i < ds.truth.size(); ++i)
        if (ds.truth[i] != *ds.noise_label) {
            t.push_back(ds.truth[i]);
            p.push_back(labels[i]);
        }
    return adjusted_rand_index(t, p);
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}


struct Task {
    Generator generator;
    std::size_t d;
    std::uint64_t seed;
};

inline std::vector<ReportRow> run_task(const ExperimentConfig& cfg, const Task& task) {
    std::vector<std::size_t> cluster_list = cfg.clusters;
    if (cluster_list.empty()) cluster_list.push_back(default_clusters(task.generator));

    auto make_row = [&](WeightKind m, LinkageKind l, std::size_t k, std::size_t S) {
        ReportRow r;
        r.seed = task.seed;
        r.generator = std::string(to_string(task.generator));
        r.d = task.d;
        r.method = std::string(to_string(m));
        r.linkage = std::string(to_string(l));
        r.k = k;
        r.S = S;
        return r;
    };

    std::vector<ReportRow> rows;
    std::size_t k = cfg.k;
    try {
        const RngSeed base{task.seed};
        LabeledDataset ds = generate({task.generator, task.d, geometry::kPaddingSd, base});
        if (cfg.noise_frac > 0.0) ds = add_noise_points(ds, cfg.noise_frac, derive_seed(base, 1));
        if (cfg.denoise_frac > 0.0) ds = knn_density_denoise(ds, cfg.denoise_frac);

        const auto t0 = Clock::now();
        KMeansConfig km;
        km.k = cfg.k;
        km.restarts = cfg.restarts;
        km.max_iters = cfg.max_iters;
        km.tol = cfg.tol;
        km.seed = derive_seed(base, 2);
        km.threads = 1;
        const KMeansResult knots = kmeans(ds.data, km);
        k = knots.knots.count();
        const double knot_ms = ms_since(t0);
        const EdgeList edges = approx_delaunay(knots.knots);

        WeightParams params = cfg.weight_params;
        params.threads = 1;
        for (WeightKind m : cfg.methods) {
            try {
                const auto t1 = Clock::now();
                const SkeletonGraph g = weight_skeleton(edges, ds.data, knots.knots, m, params);
                const double weight_ms = ms_since(t1);
                const CondensedMatrix dist = similarity_to_distance(k, g.edges, g.weights);
                for (LinkageKind l : cfg.linkages) {
                    const auto t2 = Clock::now();
                    const Dendrogram dendro = hierarchical_cluster(dist, l);
                    const double seg_ms = ms_since(t2);
                    for (std::size_t S : cluster_list) {
                        ReportRow r = make_row(m, l, k, S);
                        try {
                            const auto t3 = Clock::now();
                            const ClusteringResult res = assign_labels(cut_dendrogram(dendro, S), knots.knots);
                            r.ari = signal_ari(ds, res.labels);
                            r.wall_ms = knot_ms + weight_ms + seg_ms + ms_since(t3);
                        } catch (const std::exception& e) {
                            r.error = e.what();
                        }
                        rows.push_back(std::move(r));
                    }
                }
            } catch (const std::exception& e) {
                for (LinkageKind l : cfg.linkages)
                    for (std::size_t S : cluster_list) {
                        ReportRow r = make_row(m, l, k, S);
                        r.error = e.what();
                        rows.push_back(std::move(r));
                    }
            }
        }
    } catch (const std::exception& e) {
        rows.clear();
        for (WeightKind m : cfg.methods)
            for (LinkageKind l : cfg.linkages)
                for (std::size_t S : cluster_list) {
                    ReportRow r = make_row(m, l, k, S);
                    r.error = e.what();
                    rows.push_back(std::move(r));
                }
    }
    return rows;
}

}  // namespace detail

/// generate -> knots -> skeleton -> weights -> segment -> label -> ARI for
/// every (generator, d, repeat), scoring each method x linkage x S. Knots
/// are shared between methods of the same dataset. Failures are recorded in
/// the row's error field and the run continues.
inline std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<detail::Task> tasks;
    for (std::size_t r = 0; r < cfg.repeats; ++r)
        for (Generator g : cfg.generators)
            for (std::size_t d : cfg.dims) tasks.push_back({g, d, cfg.seed + r});

    std::vector<std::vector<ReportRow>> per_task(tasks.size());
    parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) { per_task[t] = detail::run_task(cfg, tasks[t]); });

    std::vector<ReportRow> rows;
    for (auto& v : per_task)
        for (auto& r : v) rows.push_back(std::move(r));
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.seed, a.method) < std::tie(b.seed, b.method);
    });
    return rows;
}

/// Median ARI per (generator, d, method, linkage, S), failures excluded.
inline std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
    using Key = std::tuple<std::string, std::size_t, std::string, std::string, std::size_t>;
    std::map<Key, std::pair<std::vector<double>, std::size_t>> groups;
    for (const ReportRow& r : rows) {
        auto& [aris, failures] = groups[{r.generator, r.d, r.method, r.linkage, r.S}];
        if (r.error.empty() && std::isfinite(r.ari)) aris.push_back(r.ari);
        else ++failures;
    }
    std::vector<SummaryRow> out;
    for (auto& [key, val] : groups) {
        SummaryRow s;
        std::tie(s.generator, s.d, s.method, s.linkage, s.S) = key;
        s.runs = val.first.size() + val.second;
        s.failures = val.second;
        s.median_ari = median(val.first);
        out.push_back(std::move(s));
    }
    return out;
}

inline constexpr const char* kReportHeader = "seed,generator,d,method,linkage,k,S,ari,wall_ms";

inline void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << kReportHeader << '\n';
    char buf[64];
    for (const ReportRow& r : rows) {
        os << r.seed << ',' << r.generator << ',' << r.d << ',' << r.method << ',' << r.linkage << ','
           << r.k << ',' << r.S << ',';
        if (r.error.empty()) {
            std::snprintf(buf, sizeof buf, "%.6f", r.ari);
            os << buf;
        } else {
            os << "nan";
        }
        std::snprintf(buf, sizeof buf, "%.1f", r.wall_ms);
        os << ',' << buf << '\n';
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "generator,d,method,linkage,S,runs,failures,median_ari\n";
    char buf[64];
    for (const SummaryRow& s : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", s.median_ari);
        os << s.generator << ',' << s.d << ',' << s.method << ',' << s.linkage << ',' << s.S << ','
           << s.runs << ',' << s.failures << ',' << buf << '\n';
    }
}

}  // namespace skelclus::bench
