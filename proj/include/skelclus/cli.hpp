#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bench/denoise.hpp"
#include "bench/experiment.hpp"
#include "bench/generators.hpp"
#include "bench/metrics.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "serialize.hpp"

namespace skelclus::cli {

/// Process exit code for an error kind.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::degenerate: return 4;
    }
    return 1;
}

/// Everything a cluster run depends on. Round-trips through FlatConfig, which
/// is how it is echoed into the output directory.
struct PipelineConfig {
    std::string input;                    // CSV path; empty when generator is set
    bool has_truth = false;               // last input column is a label
    std::string generator;                // bench generator name instead of input
    std::size_t dim = 2;                  // generator ambient dimension
    std::string from_skeleton;            // re-segment a saved skeleton.json
    std::size_t k = 0;                    // 0: auto
    WeightKind weight = WeightKind::voronoi;
    KernelKind kernel = KernelKind::gaussian;
    BandwidthMode bandwidth = BandwidthMode::silverman_rate;
    std::string rate = "-1/5";            // kept as written so the echo is exact
    double fixed_h = 0.0;
    double tube_radius = 0.0;             // 0: auto
    std::size_t tube_grid = 101;
    LinkageKind linkage = LinkageKind::single;
    std::size_t clusters = 2;
    std::size_t restarts = 1000;
    std::size_t max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    std::size_t threads = 0;              // 0: SKELETON_THREADS or hardware
    std::string out_dir = ".";

    WeightParams weight_params() const {
        WeightParams p;
        p.kernel.kind = kernel;
        p.bandwidth.mode = bandwidth;
        p.bandwidth.rate_exponent = io::parse_number(rate, "rate");
        p.bandwidth.fixed_h = fixed_h;
        p.tube.radius = tube_radius;
        p.tube.grid_points = tube_grid;
        p.threads = resolve_threads(threads);
        return p;
    }

    KMeansConfig kmeans_config() const {
        KMeansConfig km;
        km.k = k;
        km.restarts = restarts;
        km.max_iters = max_iters;
        km.tol = tol;
        km.seed = RngSeed{seed};
        km.threads = resolve_threads(threads);
        return km;
    }

    void validate() const {
        if (input.empty() == generator.empty())
            throw UsageError("give exactly one of an input file or a generator");
        if (!generator.empty()) bench::parse_generator(generator);
        if (clusters == 0) throw UsageError("clusters must be >= 1");
        weight_params().bandwidth.validate();
        weight_params().tube.validate();
    }
};

namespace detail {

inline std::string fmt_real(double v) { return io::detail::format_exact(v); }

inline bool parse_bool(const std::string& s, const char* key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw UsageError(std::string("bad boolean '") + s + "' for " + key);
}

}  // namespace detail

inline io::FlatConfig to_flat(const PipelineConfig& c) {
    io::FlatConfig f;
    f.set("input", c.input);
    f.set("has_truth", c.has_truth ? "true" : "false");
    f.set("generator", c.generator);
    f.set("dim", std::to_string(c.dim));
    f.set("from_skeleton", c.from_skeleton);
    f.set("k", c.k == 0 ? "auto" : std::to_string(c.k));
    f.set("weight", std::string(to_string(c.weight)));
    f.set("kernel", std::string(to_string(c.kernel)));
    f.set("bandwidth", c.bandwidth == BandwidthMode::fixed ? "fixed" : "silverman");
    f.set("rate", c.rate);
    f.set("h", detail::fmt_real(c.fixed_h));
    f.set("tube_radius", c.tube_radius == 0.0 ? "auto" : detail::fmt_real(c.tube_radius));
    f.set("tube_grid", std::to_string(c.tube_grid));
    f.set("linkage", std::string(to_string(c.linkage)));
    f.set("clusters", std::to_string(c.clusters));
    f.set("restarts", std::to_string(c.restarts));
    f.set("max_iters", std::to_string(c.max_iters));
    f.set("tol", detail::fmt_real(c.tol));
    f.set("seed", std::to_string(c.seed));
    f.set("out_dir", c.out_dir);
    return f;
}

/// Unknown keys are usage errors so typos do not pass silently. Thread count
/// is deliberately not part of the echo: it never changes results.
inline PipelineConfig pipeline_from_flat(const io::FlatConfig& f) {
    PipelineConfig c;
    for (const auto& [key, v] : f.entries()) {
        if (key == "input") c.input = v;
        else if (key == "has_truth") c.has_truth = detail::parse_bool(v, "has_truth");
        else if (key == "generator") c.generator = v;
        else if (key == "dim") c.dim = io::parse_count(v, "dim");
        else if (key == "from_skeleton") c.from_skeleton = v;
        else if (key == "k") c.k = v == "auto" ? 0 : io::parse_count(v, "k");
        else if (key == "weight") c.weight = parse_weight_kind(v);
        else if (key == "kernel") c.kernel = parse_kernel_kind(v);
        else if (key == "bandwidth") {
            if (v == "silverman") c.bandwidth = BandwidthMode::silverman_rate;
            else if (v == "fixed") c.bandwidth = BandwidthMode::fixed;
            else throw UsageError("bandwidth must be silverman or fixed");
        } else if (key == "rate") {
            io::parse_number(v, "rate");
            c.rate = v;
        } else if (key == "h") c.fixed_h = io::parse_number(v, "h");
        else if (key == "tube_radius") c.tube_radius = v == "auto" ? 0.0 : io::parse_number(v, "tube_radius");
        else if (key == "tube_grid") c.tube_grid = io::parse_count(v, "tube_grid");
        else if (key == "linkage") c.linkage = parse_linkage_kind(v);
        else if (key == "clusters") c.clusters = io::parse_count(v, "clusters");
        else if (key == "restarts") c.restarts = io::parse_count(v, "restarts");
        else if (key == "max_iters") c.max_iters = io::parse_count(v, "max_iters");
        else if (key == "tol") c.tol = io::parse_number(v, "tol");
        else if (key == "seed") c.seed = io::parse_count(v, "seed");
        else if (key == "threads") c.threads = io::parse_count(v, "threads");
        else if (key == "out_dir") c.out_dir = v;
        else throw UsageError("unknown config key '" + key + "'");
    }
    return c;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    std::string generator;
    std::size_t dim = 2;
    std::uint64_t seed = 1;
    double noise_frac = 0.0;  // uniform noise points, fraction of n
    std::string out;          // empty: stdout
};

/// Writes the dataset CSV and reports n, d and the label histogram on log.
inline bench::LabeledDataset cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& log) {
    const auto g = bench::parse_generator(opt.generator);
    auto ds = bench::generate({g, opt.dim, bench::geometry::kPaddingSd, RngSeed{opt.seed}});
    if (opt.noise_frac > 0.0) ds = bench::add_noise_points(ds, opt.noise_frac, derive_seed(RngSeed{opt.seed}, 1));
    io::write_dataset_csv(out, ds);
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t l : ds.truth) ++hist[l];
    log << "n=" << ds.size() << " d=" << ds.data.cols() << " components:";
    for (const auto& [l, c] : hist) log << ' ' << l << ':' << c;
    log << '\n';
    return ds;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterRun {
    std::size_t k = 0;
    std::size_t edges = 0;
    std::size_t clusters = 0;
    double wall_ms = 0.0;
    std::optional<double> ari;  // when truth is known
    std::vector<std::size_t> labels;
};

namespace detail {

struct LoadedInput {
    DataMatrix data;
    std::optional<std::vector<std::size_t>> truth;
};

inline LoadedInput load_input(const PipelineConfig& c) {
    if (!c.generator.empty()) {
        auto ds = bench::generate(
            {bench::parse_generator(c.generator), c.dim, bench::geometry::kPaddingSd, RngSeed{c.seed}});
        return {std::move(ds.data), std::move(ds.truth)};
    }
    auto t = io::read_csv_file(c.input, c.has_truth);
    return {std::move(t.data), std::move(t.truth)};
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& doc) {
    auto out = io::open_output(p.string());
    out << doc.dump(1) << '\n';
}

}  // namespace detail

/// Runs the pipeline and writes labels.csv, skeleton.json, dendrogram.json,
/// knot_sizes.csv, plot.svg (d >= 2) and config.txt into out_dir, then a
/// one-line summary on log. Only the summary carries timing.
inline ClusterRun cmd_cluster(const PipelineConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto in = detail::load_input(cfg);
    const DataMatrix& data = in.data;

    SkeletonGraph graph;
    if (!cfg.from_skeleton.empty()) {
        auto src = io::open_input(cfg.from_skeleton);
        nlohmann::json doc;
        try {
            src >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("cannot parse skeleton: ") + e.what());
        }
        graph = skeleton_from_json(doc);
        if (graph.knots.dim != data.cols())
            throw DataError("skeleton dimension " + std::to_string(graph.knots.dim) + " does not match data " +
                            std::to_string(data.cols()));
        const auto evidence = graph.edges.evidence;
        graph.knots = make_knot_set(data, std::move(graph.knots.centers), resolve_threads(cfg.threads));
        graph.edges.evidence = evidence;
    } else {
        const KMeansResult km = kmeans(data, cfg.kmeans_config());
        if (km.knots.count() < 2) throw UsageError("skeleton clustering needs at least two knots");
        graph = build_skeleton(data, km.knots, cfg.weight, cfg.weight_params());
    }
    const Segmentation seg = segment_skeleton(graph, cfg.linkage, cfg.clusters);

    ClusterRun run;
    run.k = graph.knots.count();
    run.edges = graph.edges.size();
    run.clusters = cfg.clusters;
    run.labels = seg.result.labels;
    if (in.truth) run.ari = bench::adjusted_rand_index(*in.truth, run.labels);

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    {
        auto out = io::open_output((dir / "labels.csv").string());
        io::write_labels_csv(out, run.labels);
    }
    detail::write_json(dir / "skeleton.json", skeleton_to_json(graph));
    detail::write_json(dir / "dendrogram.json", dendrogram_to_json(seg.dendrogram));
    {
        auto out = io::open_output((dir / "knot_sizes.csv").string());
        io::write_knot_sizes_csv(out, graph.knots);
    }
    if (data.cols() >= 2) {
        auto out = io::open_output((dir / "plot.svg").string());
        io::write_svg_plot(out, data, run.labels, &graph.knots, &graph.edges);
    }
    {
        auto out = io::open_output((dir / "config.txt").string());
        to_flat(cfg).write(out);
    }
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", run.wall_ms);
    log << "k=" << run.k << " edges=" << run.edges << " S=" << run.clusters << " wall_ms=" << buf;
    if (run.ari) {
        std::snprintf(buf, sizeof buf, "%.6f", *run.ari);
        log << " ari=" << buf;
    }
    log << '\n';
    for (const auto& w : graph.warnings) log << "warning: " << w << '\n';
    return run;
}

// ---------------------------------------------------------------------------
// eval

/// ARI between the last columns of two CSV files, printed with 6 decimals.
inline double cmd_eval(const std::string& pred_path, const std::string& truth_path, std::ostream& out) {
    auto pin = io::open_input(pred_path);
    auto tin = io::open_input(truth_path);
    const auto pred = io::read_label_column(pin);
    const auto truth = io::read_label_column(tin);
    if (pred.size() != truth.size())
        throw UsageError("prediction has " + std::to_string(pred.size()) + " rows, truth has " +
                         std::to_string(truth.size()));
    const double ari = bench::adjusted_rand_index(pred, truth);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", ari);
    out << buf << '\n';
    return ari;
}

// ---------------------------------------------------------------------------
// bench

/// Keys: generators, dims, methods, linkages, clusters, repeats, seed, k,
/// restarts, max_iters, tol, noise_frac, denoise_frac, kernel, rate,
/// tube_radius, tube_grid, threads. Lists are comma separated; "5..12"
/// expands to a range.
inline bench::ExperimentConfig experiment_from_flat(const io::FlatConfig& f) {
    bench::ExperimentConfig c;
    for (const auto& [key, v] : f.entries()) {
        if (key == "generators") {
            c.generators.clear();
            for (const auto& s : io::parse_list(v)) c.generators.push_back(bench::parse_generator(s));
        } else if (key == "dims") {
            c.dims.clear();
            for (const auto& s : io::parse_list(v)) c.dims.push_back(io::parse_count(s, "dims"));
        } else if (key == "methods") {
            c.methods.clear();
            for (const auto& s : io::parse_list(v)) c.methods.push_back(parse_weight_kind(s));
        } else if (key == "linkages") {
            c.linkages.clear();
            for (const auto& s : io::parse_list(v)) c.linkages.push_back(parse_linkage_kind(s));
        } else if (key == "clusters") {
            c.clusters.clear();
            for (const auto& s : io::parse_list(v)) c.clusters.push_back(io::parse_count(s, "clusters"));
        } else if (key == "repeats") c.repeats = io::parse_count(v, "repeats");
        else if (key == "seed") c.seed = io::parse_count(v, "seed");
        else if (key == "k") c.k = v == "auto" ? 0 : io::parse_count(v, "k");
        else if (key == "restarts") c.restarts = io::parse_count(v, "restarts");
        else if (key == "max_iters") c.max_iters = io::parse_count(v, "max_iters");
        else if (key == "tol") c.tol = io::parse_number(v, "tol");
        else if (key == "noise_frac") c.noise_frac = io::parse_number(v, "noise_frac");
        else if (key == "denoise_frac") c.denoise_frac = io::parse_number(v, "denoise_frac");
        else if (key == "kernel") c.weight_params.kernel.kind = parse_kernel_kind(v);
        else if (key == "rate") c.weight_params.bandwidth.rate_exponent = io::parse_number(v, "rate");
        else if (key == "tube_radius")
            c.weight_params.tube.radius = v == "auto" ? 0.0 : io::parse_number(v, "tube_radius");
        else if (key == "tube_grid") c.weight_params.tube.grid_points = io::parse_count(v, "tube_grid");
        else if (key == "threads") c.threads = io::parse_count(v, "threads");
        else throw UsageError("unknown experiment key '" + key + "'");
    }
    c.validate();
    return c;
}

/// Writes report.csv and summary.csv into out_dir and the summary to log.
/// Failed rows are reported on log and do not stop the run.
inline std::vector<bench::ReportRow> cmd_bench(const bench::ExperimentConfig& cfg, const std::string& out_dir,
                                               std::ostream& log) {
    const auto rows = bench::run_experiment(cfg);
    const auto summary = bench::summarize(rows);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    {
        auto out = io::open_output((dir / "report.csv").string());
        bench::write_report_csv(out, rows);
    }
    {
        auto out = io::open_output((dir / "summary.csv").string());
        bench::write_summary_csv(out, summary);
    }
    for (const auto& r : rows)
        if (!r.error.empty())
            log << "failed: seed=" << r.seed << ' ' << r.generator << " d=" << r.d << ' ' << r.method << ' '
                << r.linkage << " S=" << r.S << ": " << r.error << '\n';
    bench::write_summary_csv(log, summary);
    return rows;
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseOptions {
    std::string input;
    bool has_truth = false;
    double frac = 0.1;
    std::string out;  // empty: stdout
    std::size_t threads = 0;
};

/// Drops the lowest sqrt(n)-NN density rows; the CSV keeps the input layout.
inline std::size_t cmd_denoise(const DenoiseOptions& opt, std::ostream& out, std::ostream& log) {
    auto t = io::read_csv_file(opt.input, opt.has_truth);
    const auto keep = bench::knn_density_keep(t.data, opt.frac, resolve_threads(opt.threads));
    const std::size_t d = t.data.cols();
    if (!t.header.empty()) {
        for (std::size_t j = 0; j < t.header.size(); ++j) out << (j ? "," : "") << t.header[j];
        out << '\n';
    }
    for (std::size_t i : keep) {
        const auto row = t.data.row(i);
        for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << io::detail::format_exact(row[j]);
        if (t.truth) out << ',' << (*t.truth)[i];
        out << '\n';
    }
    log << "kept " << keep.size() << " of " << t.data.rows() << " rows\n";
    return keep.size();
}

}  // namespace skelclus::cli
