// skelclus command-line tool: gen, cluster, eval, bench, denoise.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <skelclus/cli.hpp>

namespace sc = skelclus;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string out_dir = ".";
};

// Options given on the command line override the config file key by key.
void override_key(sc::io::FlatConfig& f, const CLI::App* app, const char* flag, const std::string& key,
                  const std::string& value) {
    if (app->count(flag) > 0) f.set(key, value);
}

int run(int argc, char** argv) {
    CLI::App app{"Skeleton clustering for multivariate and high-dimensional data"};
    app.require_subcommand(1);
    Globals g;
    app.fallthrough();  // global flags may follow the subcommand
    app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0: SKELETON_THREADS or all cores)");
    app.add_option("--out-dir", g.out_dir, "Output directory");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a benchmark dataset as CSV");
    sc::cli::GenOptions gen_opt;
    gen->add_option("generator", gen_opt.generator, std::string("One of: ") + std::string(sc::bench::kGeneratorNames))
        ->required();
    gen->add_option("--dim", gen_opt.dim, "Ambient dimension")->capture_default_str();
    gen->add_option("--noise-frac", gen_opt.noise_frac, "Append uniform noise points (fraction of n)");
    gen->add_option("--out", gen_opt.out, "Output CSV (default stdout)");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Run skeleton clustering");
    std::string config_path, input, generator, from_skeleton, k = "auto", weight, kernel, rate, linkage,
        tube_radius, bandwidth;
    std::size_t dim = 2, clusters = 2, restarts = 1000, max_iters = 100, tube_grid = 101;
    double h = 0.0, tol = 1e-6;
    cluster->add_option("input", input, "Input CSV");
    cluster->add_option("--config", config_path, "Flat key = value config file");
    cluster->add_flag("--has-truth", "Last input column is a truth label");
    cluster->add_option("--generator", generator, "Generate input instead of reading a file");
    cluster->add_option("--dim", dim, "Generator ambient dimension");
    cluster->add_option("--from-skeleton", from_skeleton, "Re-segment a saved skeleton.json");
    cluster->add_option("--k", k, "Knot count or 'auto'");
    cluster->add_option("--weight", weight, "voronoi, face, tube or avgdist");
    cluster->add_option("--kernel", kernel, "gaussian or uniform");
    cluster->add_option("--bandwidth", bandwidth, "silverman or fixed");
    cluster->add_option("--rate", rate, "Bandwidth rate exponent, e.g. -1/5");
    cluster->add_option("--fixed-h", h, "Fixed bandwidth");
    cluster->add_option("--tube-radius", tube_radius, "Tube radius or 'auto'");
    cluster->add_option("--tube-grid", tube_grid, "Tube grid points");
    cluster->add_option("--linkage", linkage, "single, average or complete");
    cluster->add_option("--clusters,-S", clusters, "Final number of clusters");
    cluster->add_option("--restarts", restarts, "k-means restarts");
    cluster->add_option("--max-iters", max_iters, "k-means iterations per restart");
    cluster->add_option("--tol", tol, "k-means relative tolerance");

    // eval
    auto* eval = app.add_subcommand("eval", "Adjusted Rand index of predicted against true labels");
    std::string pred_path, truth_path;
    eval->add_option("pred", pred_path, "Predicted labels CSV (last column)")->required();
    eval->add_option("truth", truth_path, "True labels CSV (last column)")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark experiment");
    std::string bench_config;
    bench->add_option("config", bench_config, "Experiment config file")->required();

    // denoise
    auto* denoise = app.add_subcommand("denoise", "Drop the lowest kNN-density observations");
    sc::cli::DenoiseOptions dn;
    denoise->add_option("input", dn.input, "Input CSV")->required();
    denoise->add_flag("--has-truth", dn.has_truth, "Last input column is a truth label");
    denoise->add_option("--frac", dn.frac, "Fraction to drop")->capture_default_str();
    denoise->add_option("--out", dn.out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    auto global_given = [&](const char* flag) { return app.count(flag) > 0; };

    if (gen->parsed()) {
        gen_opt.seed = g.seed;
        if (gen_opt.out.empty()) {
            sc::cli::cmd_gen(gen_opt, std::cout, std::cerr);
        } else {
            auto out = sc::io::open_output(gen_opt.out);
            sc::cli::cmd_gen(gen_opt, out, std::cout);
        }
        return 0;
    }
    if (cluster->parsed()) {
        sc::io::FlatConfig f = config_path.empty() ? sc::io::FlatConfig{} : sc::io::FlatConfig::parse_file(config_path);
        if (!input.empty()) f.set("input", input);
        if (cluster->count("--has-truth") > 0) f.set("has_truth", "true");
        override_key(f, cluster, "--generator", "generator", generator);
        override_key(f, cluster, "--dim", "dim", std::to_string(dim));
        override_key(f, cluster, "--from-skeleton", "from_skeleton", from_skeleton);
        override_key(f, cluster, "--k", "k", k);
        override_key(f, cluster, "--weight", "weight", weight);
        override_key(f, cluster, "--kernel", "kernel", kernel);
        override_key(f, cluster, "--bandwidth", "bandwidth", bandwidth);
        override_key(f, cluster, "--rate", "rate", rate);
        override_key(f, cluster, "--fixed-h", "h", sc::io::detail::format_exact(h));
        override_key(f, cluster, "--tube-radius", "tube_radius", tube_radius);
        override_key(f, cluster, "--tube-grid", "tube_grid", std::to_string(tube_grid));
        override_key(f, cluster, "--linkage", "linkage", linkage);
        override_key(f, cluster, "--clusters", "clusters", std::to_string(clusters));
        override_key(f, cluster, "--restarts", "restarts", std::to_string(restarts));
        override_key(f, cluster, "--max-iters", "max_iters", std::to_string(max_iters));
        override_key(f, cluster, "--tol", "tol", sc::io::detail::format_exact(tol));
        if (global_given("--seed")) f.set("seed", std::to_string(g.seed));
        if (global_given("--out-dir")) f.set("out_dir", g.out_dir);
        if (global_given("--threads")) f.set("threads", std::to_string(g.threads));
        sc::cli::cmd_cluster(sc::cli::pipeline_from_flat(f), std::cout);
        return 0;
    }
    if (eval->parsed()) {
        sc::cli::cmd_eval(pred_path, truth_path, std::cout);
        return 0;
    }
    if (bench->parsed()) {
        auto f = sc::io::FlatConfig::parse_file(bench_config);
        if (global_given("--seed")) f.set("seed", std::to_string(g.seed));
        if (global_given("--threads")) f.set("threads", std::to_string(g.threads));
        sc::cli::cmd_bench(sc::cli::experiment_from_flat(f), g.out_dir, std::cout);
        return 0;
    }
    if (denoise->parsed()) {
        dn.threads = g.threads;
        if (dn.out.empty()) {
            sc::cli::cmd_denoise(dn, std::cout, std::cerr);
        } else {
            auto out = sc::io::open_output(dn.out);
            sc::cli::cmd_denoise(dn, out, std::cout);
        }
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sc::cli::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
