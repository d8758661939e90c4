#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "skeleton.hpp"

namespace skelclus {

// ---------------------------------------------------------------------------
// Kernels and bandwidths

enum class KernelKind { gaussian, uniform };

/// Symmetric unit-mass kernel on the real line.
struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;

    double operator()(double u) const noexcept {
        if (kind == KernelKind::uniform) return std::abs(u) <= 1.0 ? 0.5 : 0.0;
        return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    }
};

inline KernelKind parse_kernel_kind(std::string_view s) {
    if (s == "gaussian") return KernelKind::gaussian;
    if (s == "uniform") return KernelKind::uniform;
    throw UsageError("unknown kernel '" + std::string(s) + "' (expected gaussian or uniform)");
}

inline std::string_view to_string(KernelKind k) {
    return k == KernelKind::gaussian ? "gaussian" : "uniform";
}

enum class BandwidthMode { silverman_rate, fixed };

struct BandwidthRule {
    BandwidthMode mode = BandwidthMode::silverman_rate;
    double rate_exponent = -0.2;  // exponent on n_loc, within [-1/3, -1/10]
    double fixed_h = 0.0;         // used when mode == fixed

    void validate() const {
        if (mode == BandwidthMode::fixed) {
            if (!(fixed_h > 0.0) || !std::isfinite(fixed_h))
                throw UsageError("fixed bandwidth must be a positive finite number");
            return;
        }
        constexpr double slack = 1e-9;
        if (!(rate_exponent >= -1.0 / 3.0 - slack && rate_exponent <= -0.1 + slack))
            throw UsageError("bandwidth rate exponent must lie in [-1/3, -1/10], got " +
                             std::to_string(rate_exponent));
    }
};

/// h = (4/3) * sigma * n_loc^rate. In fixed mode the rule's fixed_h is returned.
inline double silverman_bandwidth(double sigma_hat, std::size_t n_loc, const BandwidthRule& rule) {
    rule.validate();
    if (rule.mode == BandwidthMode::fixed) return rule.fixed_h;
    if (n_loc < 2) throw DegenerateError("bandwidth needs at least two points");
    if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat))
        throw DegenerateError("bandwidth needs a positive spread");
    return 4.0 / 3.0 * sigma_hat * std::pow(static_cast<double>(n_loc), rule.rate_exponent);
}

// ---------------------------------------------------------------------------
// Central-line geometry

struct LineProjection {
    double t = 0.0;          // Pi(x) = c_j + t (c_l - c_j)
    double perp_dist = 0.0;  // |x - Pi(x)|
};

inline LineProjection project_to_central_line(std::span<const double> x, std::span<const double> cj,
                                              std::span<const double> cl) {
    if (x.size() != cj.size() || cj.size() != cl.size())
        throw UsageError("projection: dimension mismatch");
    const double len2 = squared_dist(cj, cl);
    if (!(len2 > 0.0)) throw DegenerateError("projection onto a line through coincident knots");
    double dot = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) dot += (x[a] - cj[a]) * (cl[a] - cj[a]);
    const double t = dot / len2;
    double perp2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double e = x[a] - (cj[a] + t * (cl[a] - cj[a]));
        perp2 += e * e;
    }
    return {t, std::sqrt(perp2)};
}

namespace detail {

inline double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline std::vector<std::vector<std::size_t>> cell_members(const KnotSet& knots) {
    std::vector<std::vector<std::size_t>> cells(knots.count());
    for (std::size_t i = 0; i < knots.assign1.size(); ++i) cells[knots.assign1[i]].push_back(i);
    return cells;
}

inline void check_edge(const KnotSet& knots, Edge e) {
    if (e.first == e.second || e.first >= knots.count() || e.second >= knots.count())
        throw UsageError("edge refers to an invalid knot pair");
}

}  // namespace detail

/// Estimate for one edge; `warning` is set when the estimator hit a
/// degenerate case and reported 0.
struct EdgeEstimate {
    double value = 0.0;
    std::optional<std::string> warning;
};

// ---------------------------------------------------------------------------
// Voronoi density

/// (evidence / n) / |c_j - c_l|.
inline double voronoi_density(Edge edge, const KnotSet& knots, std::size_t evidence) {
    detail::check_edge(knots, edge);
    const std::size_t n = knots.observations();
    if (n == 0) throw UsageError("knot set has no observations");
    const double dist = std::sqrt(squared_dist(knots.center(edge.first), knots.center(edge.second)));
    if (!(dist > 0.0)) throw DegenerateError("Voronoi density between coincident knots");
    return static_cast<double>(evidence) / static_cast<double>(n) / dist;
}

inline double voronoi_density(Edge edge, const KnotSet& knots, const EdgeList& edges) {
    const std::size_t pos = edges.find(edge.first, edge.second);
    return voronoi_density(edge, knots, pos == edges.size() ? 0 : edges.evidence[pos]);
}

// ---------------------------------------------------------------------------
// Face density

namespace detail {

inline EdgeEstimate face_density_over(Edge edge, const DataMatrix& data, const KnotSet& knots,
                                      const KernelSpec& kernel, const BandwidthRule& bw,
                                      std::span<const std::size_t> cell_a,
                                      std::span<const std::size_t> cell_b) {
    const auto cj = knots.center(edge.first);
    const auto cl = knots.center(edge.second);
    const double len = std::sqrt(squared_dist(cj, cl));
    if (!(len > 0.0)) throw DegenerateError("face density between coincident knots");

    std::vector<double> pos;  // projected positions along the line, in length units
    pos.reserve(cell_a.size() + cell_b.size());
    for (auto cell : {cell_a, cell_b})
        for (std::size_t i : cell) pos.push_back(project_to_central_line(data.row(i), cj, cl).t * len);

    if (pos.size() < 2) return {0.0, "fewer than two points in the two cells"};
    const double sd = sample_sd(pos);
    if (bw.mode == BandwidthMode::silverman_rate && !(sd > 0.0))
        return {0.0, "zero spread of projected points"};
    const double h = silverman_bandwidth(sd, pos.size(), bw);

    const double mid = 0.5 * len;
    double sum = 0.0;
    for (double s : pos) sum += kernel((s - mid) / h);
    return {sum / (static_cast<double>(data.rows()) * h), std::nullopt};
}

}  // namespace detail

/// Projected 1-D KDE of the two cells' points at the midpoint of the central
/// line, normalised by the total sample size.
inline EdgeEstimate face_density(Edge edge, const DataMatrix& data, const KnotSet& knots,
                                 const KernelSpec& kernel, const BandwidthRule& bw) {
    detail::check_edge(knots, edge);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < knots.assign1.size(); ++i) {
        if (knots.assign1[i] == edge.first) a.push_back(i);
        else if (knots.assign1[i] == edge.second) b.push_back(i);
    }
    return detail::face_density_over(edge, data, knots, kernel, bw, a, b);
}

// ---------------------------------------------------------------------------
// Tube density

struct TubeSpec {
    double radius = 0.0;  // 0 selects tube_radius_rule
    std::size_t grid_points = 101;

    void validate() const {
        if (radius < 0.0 || !std::isfinite(radius)) throw UsageError("tube radius must be >= 0");
        if (grid_points < 2) throw UsageError("tube grid needs at least two points");
    }
};

struct TubeRadius {
    double radius = 0.0;
    bool substituted = false;  // zero within-cell spread was replaced
};

/// R = sqrt(mean over cells of the mean squared distance to the cell's knot).
/// A zero result is replaced by 0.1 x the smallest positive inter-knot distance.
inline TubeRadius tube_radius_rule(const KnotSet& knots, const DataMatrix& data) {
    const std::size_t k = knots.count();
    std::vector<double> ss(k, 0.0);
    std::vector<std::size_t> cnt(k, 0);
    for (std::size_t i = 0; i < knots.assign1.size(); ++i) {
        ss[knots.assign1[i]] += squared_dist(data.row(i), knots.center(knots.assign1[i]));
        ++cnt[knots.assign1[i]];
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (cnt[j] == 0) throw DegenerateError("tube radius rule needs every knot to own a point");
        acc += ss[j] / static_cast<double>(cnt[j]);
    }
    const double r = std::sqrt(acc / static_cast<double>(k));
    if (r > 0.0) return {r, false};

    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            const double dd = std::sqrt(squared_dist(knots.center(a), knots.center(b)));
            if (dd > 0.0) smallest = std::min(smallest, dd);
        }
    if (!std::isfinite(smallest)) throw DegenerateError("all knots coincide; no tube radius");
    return {0.1 * smallest, true};
}

struct TubeEstimate {
    double value = 0.0;
    double argmin_t = 0.0;
    std::optional<std::string> warning;
};

/// Minimum over a uniform t-grid of the projected KDE of all points within
/// perpendicular distance R of the central line.
inline TubeEstimate tube_density(Edge edge, const DataMatrix& data, const KnotSet& knots,
                                 const KernelSpec& kernel, const BandwidthRule& bw, double radius,
                                 std::size_t grid_points) {
    detail::check_edge(knots, edge);
    if (!(radius > 0.0)) throw UsageError("tube radius must be positive");
    if (grid_points < 2) throw UsageError("tube grid needs at least two points");
    const auto cj = knots.center(edge.first);
    const auto cl = knots.center(edge.second);
    const double len = std::sqrt(squared_dist(cj, cl));
    if (!(len > 0.0)) throw DegenerateError("tube density between coincident knots");

    std::vector<double> pos;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const LineProjection p = project_to_central_line(data.row(i), cj, cl);
        if (p.perp_dist <= radius) pos.push_back(p.t * len);
    }
    if (pos.empty()) return {0.0, 0.0, "empty tube"};
    const double sd = detail::sample_sd(pos);
    if (bw.mode == BandwidthMode::silverman_rate && (pos.size() < 2 || !(sd > 0.0)))
        return {0.0, 0.0, "too few distinct points in tube"};
    const double h = silverman_bandwidth(sd, pos.size(), bw);

    const double scale = 1.0 / (static_cast<double>(data.rows()) * h);
    TubeEstimate best{std::numeric_limits<double>::infinity(), 0.0, std::nullopt};
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
        const double at = t * len;
        double sum = 0.0;
        for (double s : pos) sum += kernel((s - at) / h);
        const double v = sum * scale;
        if (v < best.value) {  // strict: ties keep the smaller t
            best.value = v;
            best.argmin_t = t;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Average-distance baseline

namespace detail {

inline EdgeEstimate avgdist_over(const DataMatrix& data, std::span<const std::size_t> cell_a,
                                 std::span<const std::size_t> cell_b) {
    if (cell_a.empty() || cell_b.empty()) return {0.0, "empty cell"};
    double sum = 0.0;
    for (std::size_t x : cell_a)
        for (std::size_t y : cell_b) sum += std::sqrt(squared_dist(data.row(x), data.row(y)));
    const double mean = sum / (static_cast<double>(cell_a.size()) * static_cast<double>(cell_b.size()));
    if (!(mean > 0.0)) throw DegenerateError("average distance between cells is zero");
    return {1.0 / mean, std::nullopt};
}

}  // namespace detail

/// 1 / mean pairwise distance between the two cells' observations.
inline EdgeEstimate avgdist_similarity(Edge edge, const DataMatrix& data, const KnotSet& knots) {
    detail::check_edge(knots, edge);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < knots.assign1.size(); ++i) {
        if (knots.assign1[i] == edge.first) a.push_back(i);
        else if (knots.assign1[i] == edge.second) b.push_back(i);
    }
    return detail::avgdist_over(data, a, b);
}

// ---------------------------------------------------------------------------
// Dispatch

struct WeightParams {
    KernelSpec kernel{};
    BandwidthRule bandwidth{};
    TubeSpec tube{};
    std::size_t threads = 1;
};

/// Weights every edge with the chosen estimator. Degenerate edges get weight
/// 0 and a warning; only misconfiguration throws.
inline SkeletonGraph weight_skeleton(const EdgeList& edges, const DataMatrix& data,
                                     const KnotSet& knots, WeightKind kind,
                                     const WeightParams& params = {}) {
    if (knots.observations() != data.rows())
        throw UsageError("knot assignments do not match the data rows");
    if (knots.dim != data.cols()) throw UsageError("knot dimension does not match the data");
    params.bandwidth.validate();
    params.tube.validate();

    SkeletonGraph g;
    g.knots = knots;
    g.edges = edges;
    g.weight_kind = kind;
    g.weights.assign(edges.size(), 0.0);
    if (edges.size() == 0) return g;

    double radius = params.tube.radius;
    if (kind == WeightKind::tube && radius == 0.0) {
        const TubeRadius rr = tube_radius_rule(knots, data);
        radius = rr.radius;
        if (rr.substituted)
            g.warnings.push_back("tube radius: zero within-cell spread, using 0.1 x min knot distance");
    }

    const auto cells = detail::cell_members(knots);
    std::vector<std::optional<std::string>> notes(edges.size());
    parallel_for(edges.size(), params.threads, [&](std::size_t e) {
        const Edge edge = edges.pairs[e];
        switch (kind) {
            case WeightKind::voronoi:
                g.weights[e] = voronoi_density(edge, knots, edges.evidence[e]);
                break;
            case WeightKind::face: {
                const EdgeEstimate r = detail::face_density_over(
                    edge, data, knots, params.kernel, params.bandwidth, cells[edge.first], cells[edge.second]);
                g.weights[e] = r.value;
                notes[e] = r.warning;
                break;
            }
            case WeightKind::tube: {
                const TubeEstimate r = tube_density(edge, data, knots, params.kernel, params.bandwidth,
                                                    radius, params.tube.grid_points);
                g.weights[e] = r.value;
                notes[e] = r.warning;
                break;
            }
            case WeightKind::avgdist: {
                const EdgeEstimate r = detail::avgdist_over(data, cells[edge.first], cells[edge.second]);
                g.weights[e] = r.value;
                notes[e] = r.warning;
                break;
            }
        }
    });
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (notes[e])
            g.warnings.push_back(std::to_string(edges.pairs[e].first) + "-" +
                                 std::to_string(edges.pairs[e].second) + ": " + *notes[e]);
    return g;
}

}  // namespace skelclus
