#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "../core.hpp"
#include "../random.hpp"
#include "geometry.hpp"

namespace skelclus::bench {

struct LabeledDataset {
    DataMatrix data;
    std::vector<std::size_t> truth;          // contiguous from 0
    std::optional<std::size_t> noise_label;  // set once noise points were appended

    std::size_t size() const noexcept { return truth.size(); }
};

enum class Generator { yinyang, mickey, manifold_mixture, ring, mix_mickey };

inline constexpr std::string_view kGeneratorNames =
    "yinyang, mickey, manifold_mixture, ring, mix_mickey";

inline Generator parse_generator(std::string_view s) {
    if (s == "yinyang") return Generator::yinyang;
    if (s == "mickey") return Generator::mickey;
    if (s == "manifold_mixture") return Generator::manifold_mixture;
    if (s == "ring") return Generator::ring;
    if (s == "mix_mickey") return Generator::mix_mickey;
    throw UsageError("unknown generator '" + std::string(s) + "' (expected one of " +
                     std::string(kGeneratorNames) + ")");
}

inline std::string_view to_string(Generator g) {
    switch (g) {
        case Generator::yinyang: return "yinyang";
        case Generator::mickey: return "mickey";
        case Generator::manifold_mixture: return "manifold_mixture";
        case Generator::ring: return "ring";
        case Generator::mix_mickey: return "mix_mickey";
    }
    return "?";
}

/// Smallest ambient dimension a generator supports (its intrinsic dimension).
inline std::size_t min_dim(Generator g) { return g == Generator::manifold_mixture ? 3 : 2; }

struct GeneratorSpec {
    Generator name = Generator::yinyang;
    std::size_t ambient_dim = 2;
    double noise_sd = geometry::kPaddingSd;
    RngSeed seed{};
};

namespace detail {

/// Collects intrinsic coordinates, then appends iid N(0, sd^2) columns. The
/// intrinsic block is drawn first, so the leading columns for a seed do not
/// depend on the ambient dimension.
class DatasetBuilder {
public:
    DatasetBuilder(std::size_t intrinsic, std::size_t ambient, RngSeed seed)
        : intrinsic_(intrinsic), ambient_(ambient), rng_(seed) {
        if (ambient < intrinsic)
            throw UsageError("ambient dimension " + std::to_string(ambient) + " is below the intrinsic " +
                             std::to_string(intrinsic));
    }

    Rng& rng() { return rng_; }

    void add(std::initializer_list<double> coords, std::size_t label) {
        rows_.insert(rows_.end(), coords.begin(), coords.end());
        truth_.push_back(label);
    }

    LabeledDataset finish(double noise_sd) {
        const std::size_t n = truth_.size();
        std::vector<double> values(n * ambient_);
        for (std::size_t i = 0; i < n; ++i)
            std::copy_n(rows_.begin() + static_cast<std::ptrdiff_t>(i * intrinsic_), intrinsic_,
                        values.begin() + static_cast<std::ptrdiff_t>(i * ambient_));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = intrinsic_; j < ambient_; ++j) values[i * ambient_ + j] = rng_.normal(0.0, noise_sd);
        return {DataMatrix(n, ambient_, std::move(values)), std::move(truth_), std::nullopt};
    }

private:
    std::size_t intrinsic_;
    std::size_t ambient_;
    Rng rng_;
    std::vector<double> rows_;
    std::vector<std::size_t> truth_;
};

inline double angle(Rng& rng) { return rng.uniform(0.0, 2.0 * std::numbers::pi); }

}  // namespace detail

/// Outer ring (2000), two inner arcs (400 each), two clumps (200 each); n = 3200.
inline LabeledDataset gen_yinyang(std::size_t d, RngSeed seed, double noise_sd = geometry::kPaddingSd) {
    namespace g = geometry::yinyang;
    if (d < 2) throw UsageError("yinyang needs dimension >= 2");
    detail::DatasetBuilder b(2, d, seed);
    auto& rng = b.rng();
    constexpr double pi = std::numbers::pi;
    for (int i = 0; i < 2000; ++i) {
        const double th = detail::angle(rng);
        const double r = g::kOuterRadius + rng.normal(0.0, g::kOuterJitterSd);
        b.add({r * std::cos(th), r * std::sin(th)}, 0);
    }
    // Upper arc: left half of the circle around (0, 1); lower arc: right half
    // of the circle around (0, -1). Both would meet at the origin untrimmed.
    for (int i = 0; i < 400; ++i) {
        const double th = rng.uniform(pi / 2, 3 * pi / 2 - g::kArcTrim);
        const double r = g::kArcRadius + rng.normal(0.0, g::kArcJitterSd);
        b.add({r * std::cos(th), g::kArcCenterY + r * std::sin(th)}, 1);
    }
    for (int i = 0; i < 400; ++i) {
        const double th = rng.uniform(-pi / 2, pi / 2 - g::kArcTrim);
        const double r = g::kArcRadius + rng.normal(0.0, g::kArcJitterSd);
        b.add({r * std::cos(th), -g::kArcCenterY + r * std::sin(th)}, 2);
    }
    for (int i = 0; i < 200; ++i) b.add({rng.normal(0.0, g::kClumpSd), g::kClumpY + rng.normal(0.0, g::kClumpSd)}, 3);
    for (int i = 0; i < 200; ++i) b.add({rng.normal(0.0, g::kClumpSd), -g::kClumpY + rng.normal(0.0, g::kClumpSd)}, 4);
    return b.finish(noise_sd);
}

/// Large disk (1000) and two small disks (100 each), uniform inside.
inline LabeledDataset gen_mickey(std::size_t d, RngSeed seed, double noise_sd = geometry::kPaddingSd) {
    namespace g = geometry::mickey;
    if (d < 2) throw UsageError("mickey needs dimension >= 2");
    detail::DatasetBuilder b(2, d, seed);
    auto& rng = b.rng();
    auto disk = [&](double cx, double cy, double radius, std::size_t label) {
        const double th = detail::angle(rng);
        const double r = radius * std::sqrt(rng.uniform());
        b.add({cx + r * std::cos(th), cy + r * std::sin(th)}, label);
    };
    for (int i = 0; i < 1000; ++i) disk(0.0, 0.0, g::kFaceRadius, 0);
    for (int i = 0; i < 100; ++i) disk(-g::kEarX, g::kEarY, g::kEarRadius, 1);
    for (int i = 0; i < 100; ++i) disk(g::kEarX, g::kEarY, g::kEarRadius, 2);
    return b.finish(noise_sd);
}

/// 2-D plane (2000), 3-D Gaussian (400) and a 1-D ring (800).
inline LabeledDataset gen_manifold_mixture(std::size_t d, RngSeed seed,
                                           double noise_sd = geometry::kPaddingSd) {
    namespace g = geometry::manifold;
    if (d < 3) throw UsageError("manifold_mixture needs dimension >= 3");
    detail::DatasetBuilder b(3, d, seed);
    auto& rng = b.rng();
    for (int i = 0; i < 2000; ++i) b.add({rng.uniform(0.0, g::kPlaneSide), rng.uniform(0.0, g::kPlaneSide), 0.0}, 0);
    for (int i = 0; i < 400; ++i)
        b.add({g::kBlobX + rng.normal(0.0, g::kBlobSd), rng.normal(0.0, g::kBlobSd), rng.normal(0.0, g::kBlobSd)}, 1);
    for (int i = 0; i < 800; ++i) {
        const double th = detail::angle(rng);
        b.add({g::kRingX + g::kRingRadius * std::cos(th) + rng.normal(0.0, g::kRingJitterSd),
               g::kRingY + g::kRingRadius * std::sin(th) + rng.normal(0.0, g::kRingJitterSd), 0.0},
              2);
    }
    return b.finish(noise_sd);
}

/// n = 1200 from a 1/6 : 5/6 mixture of a noisy unit circle (label 1) and a
/// central Gaussian (label 0).
inline LabeledDataset gen_ring(std::size_t d, RngSeed seed, double noise_sd = geometry::kPaddingSd) {
    namespace g = geometry::ring;
    if (d < 2) throw UsageError("ring needs dimension >= 2");
    detail::DatasetBuilder b(2, d, seed);
    auto& rng = b.rng();
    for (int i = 0; i < 1200; ++i) {
        if (rng.uniform() < g::kRingProbability) {
            const double th = detail::angle(rng);
            b.add({g::kRingRadius * std::cos(th) + rng.normal(0.0, g::kSd),
                   g::kRingRadius * std::sin(th) + rng.normal(0.0, g::kSd)},
                  1);
        } else {
            b.add({rng.normal(0.0, g::kSd), rng.normal(0.0, g::kSd)}, 0);
        }
    }
    return b.finish(noise_sd);
}

/// Three overlapping Gaussians with covariance 2I: 2000 at the origin and
/// 600 each at (3, 3) and (-3, 3). Two-dimensional unless padded.
inline LabeledDataset gen_mix_mickey(RngSeed seed, std::size_t d = 2, double noise_sd = geometry::kPaddingSd) {
    namespace g = geometry::mix_mickey;
    if (d < 2) throw UsageError("mix_mickey needs dimension >= 2");
    detail::DatasetBuilder b(2, d, seed);
    auto& rng = b.rng();
    const double sd = std::sqrt(g::kVariance);
    for (int i = 0; i < 2000; ++i) b.add({rng.normal(0.0, sd), rng.normal(0.0, sd)}, 0);
    for (int i = 0; i < 600; ++i) b.add({g::kSmallX + rng.normal(0.0, sd), g::kSmallY + rng.normal(0.0, sd)}, 1);
    for (int i = 0; i < 600; ++i) b.add({-g::kSmallX + rng.normal(0.0, sd), g::kSmallY + rng.normal(0.0, sd)}, 2);
    return b.finish(noise_sd);
}

inline LabeledDataset generate(const GeneratorSpec& spec) {
    switch (spec.name) {
        case Generator::yinyang: return gen_yinyang(spec.ambient_dim, spec.seed, spec.noise_sd);
        case Generator::mickey: return gen_mickey(spec.ambient_dim, spec.seed, spec.noise_sd);
        case Generator::manifold_mixture: return gen_manifold_mixture(spec.ambient_dim, spec.seed, spec.noise_sd);
        case Generator::ring: return gen_ring(spec.ambient_dim, spec.seed, spec.noise_sd);
        case Generator::mix_mickey: return gen_mix_mickey(spec.seed, spec.ambient_dim, spec.noise_sd);
    }
    throw UsageError("unknown generator");
}

/// Appends round(frac * n) points, uniform over the (slightly widened)
/// bounding box of the first two dimensions and N(0, noise_sd^2) elsewhere.
/// They share one fresh truth label.
inline LabeledDataset add_noise_points(const LabeledDataset& ds, double frac, RngSeed seed,
                                       double noise_sd = geometry::kPaddingSd) {
    if (!(frac > 0.0 && frac <= 1.0)) throw UsageError("noise fraction must lie in (0, 1]");
    const std::size_t n = ds.size();
    const std::size_t d = ds.data.cols();
    if (d < 2) throw UsageError("noise points need at least two dimensions");
    const auto extra = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
    if (extra == 0) return ds;

    double lo[2] = {ds.data(0, 0), ds.data(0, 1)};
    double hi[2] = {lo[0], lo[1]};
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], ds.data(i, a));
            hi[a] = std::max(hi[a], ds.data(i, a));
        }
    for (int a = 0; a < 2; ++a) {
        const double pad = 0.5 * geometry::kNoiseBoxExpansion * (hi[a] - lo[a]);
        lo[a] -= pad;
        hi[a] += pad;
    }

    const std::size_t noise_label =
        ds.noise_label ? *ds.noise_label : *std::max_element(ds.truth.begin(), ds.truth.end()) + 1;
    std::vector<double> values(ds.data.values().begin(), ds.data.values().end());
    values.reserve((n + extra) * d);
    std::vector<std::size_t> truth = ds.truth;
    Rng rng(seed);
    for (std::size_t i = 0; i < extra; ++i) {
        values.push_back(rng.uniform(lo[0], hi[0]));
        values.push_back(rng.uniform(lo[1], hi[1]));
        for (std::size_t j = 2; j < d; ++j) values.push_back(rng.normal(0.0, noise_sd));
        truth.push_back(noise_label);
    }
    return {DataMatrix(n + extra, d, std::move(values)), std::move(truth), noise_label};
}

}  // namespace skelclus::bench
