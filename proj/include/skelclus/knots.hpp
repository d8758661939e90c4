#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"
#include "nearest.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace skelclus {

/// k = round(sqrt(n)), at least 1.
inline std::size_t reference_knot_count(std::size_t n) {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return std::max<std::size_t>(1, k);
}

struct KMeansConfig {
    std::size_t k = 0;  // 0 selects reference_knot_count(n)
    std::size_t restarts = 1000;
    std::size_t max_iters = 100;
    double tol = 1e-6;  // relative objective decrease below which a restart stops
    RngSeed seed{};
    std::size_t threads = 0;
};

struct KMeansResult {
    KnotSet knots;
    double objective = 0.0;              // within-cluster sum of squares of the winner
    std::size_t best_restart = 0;
    std::vector<double> restart_objectives;
    std::vector<double> history;         // per-iteration objective of the winning restart
};

namespace detail {

inline std::size_t count_distinct_rows(const DataMatrix& data, std::size_t stop_at) {
    const std::size_t n = data.rows();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto less = [&](std::size_t a, std::size_t b) {
        const auto ra = data.row(a);
        const auto rb = data.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n && distinct < stop_at; ++i)
        if (less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

struct LloydRun {
    std::vector<double> centers;
    std::vector<std::size_t> labels;
    std::vector<double> history;
    double objective = 0.0;
};

class LloydSolver {
public:
    LloydSolver(const DataMatrix& data, std::size_t k) : data_(data), k_(k), d_(data.cols()) {}

    LloydRun run(const KMeansConfig& cfg, RngSeed seed) const {
        return run_from(seed_plus_plus(seed), cfg);
    }

    /// Lloyd iterations from explicit starting centers. Once Lloyd stalls, a
    /// pass of single-point transfers is tried; if it moves anything, Lloyd
    /// resumes. Iterations of both kinds count against max_iters.
    LloydRun run_from(std::vector<double> centers, const KMeansConfig& cfg) const {
        LloydRun r;
        r.centers = std::move(centers);
        r.labels.resize(data_.rows());
        std::vector<double> dist2(data_.rows());
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t it = 0;; ++it) {
            r.objective = assign_and_repair(r.centers, r.labels, dist2);
            r.history.push_back(r.objective);
            if (it + 1 >= cfg.max_iters) break;
            if (it > 0 && prev - r.objective <= cfg.tol * prev) {
                if (++it >= cfg.max_iters || transfer_pass(r.centers, r.labels) == 0) break;
                prev = std::numeric_limits<double>::infinity();
                continue;
            }
            prev = r.objective;
            update_means(r.centers, r.labels);
        }
        return r;
    }

private:
    std::vector<double> seed_plus_plus(RngSeed seed) const {
        const std::size_t n = data_.rows();
        Rng rng(seed);
        std::vector<double> centers;
        centers.reserve(k_ * d_);
        auto push = [&](std::size_t i) {
            const auto row = data_.row(i);
            centers.insert(centers.end(), row.begin(), row.end());
        };
        push(rng.below(n));
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        for (std::size_t c = 1; c < k_; ++c) {
            const std::span<const double> last(centers.data() + (c - 1) * d_, d_);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                best[i] = std::min(best[i], squared_dist(data_.row(i), last));
                total += best[i];
            }
            if (total <= 0.0) throw DegenerateError("k-means++ seeding ran out of distinct points");
            const double target = rng.uniform() * total;
            double acc = 0.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                acc += best[i];
                if (best[i] > 0.0 && acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // rounding left target beyond the last partial sum
                for (std::size_t i = n; i-- > 0;)
                    if (best[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
            push(pick);
        }
        return centers;
    }

    double assign(const std::vector<double>& centers, std::vector<std::size_t>& labels,
                  std::vector<double>& dist2, std::vector<std::size_t>& sizes) const {
        const KnotSearch search(centers, d_);
        std::fill(sizes.begin(), sizes.end(), 0);
        double objective = 0.0;
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            const KnotHit h = search.nearest(data_.row(i));
            labels[i] = h.index;
            dist2[i] = h.dist2;
            ++sizes[h.index];
            objective += h.dist2;
        }
        return objective;
    }

    // Empty cells are re-seeded at the observation farthest from its own
    // center (taken from a cell that keeps at least one other member).
    double assign_and_repair(std::vector<double>& centers, std::vector<std::size_t>& labels,
                             std::vector<double>& dist2) const {
        std::vector<std::size_t> sizes(k_);
        double objective = assign(centers, labels, dist2, sizes);
        for (std::size_t round = 0; round <= k_; ++round) {
            bool repaired = false;
            for (std::size_t e = 0; e < k_; ++e) {
                if (sizes[e] != 0) continue;
                std::size_t far = data_.rows();
                double far_d = -1.0;
                for (std::size_t i = 0; i < data_.rows(); ++i) {
                    if (sizes[labels[i]] >= 2 && dist2[i] > far_d) {
                        far_d = dist2[i];
                        far = i;
                    }
                }
                if (far == data_.rows()) throw DegenerateError("cannot repair empty k-means cluster");
                const auto row = data_.row(far);
                std::copy(row.begin(), row.end(), centers.begin() + static_cast<std::ptrdiff_t>(e * d_));
                --sizes[labels[far]];
                labels[far] = e;
                dist2[far] = 0.0;
                sizes[e] = 1;
                repaired = true;
            }
            if (!repaired) return objective;
            objective = assign(centers, labels, dist2, sizes);
        }
        for (std::size_t s : sizes)
            if (s == 0) throw DegenerateError("k-means left an empty cluster after repair");
        return objective;
    }

    // One sweep of exact single-point moves: observation x leaves cell a for b
    // when n_b/(n_b+1)*|x-c_b|^2 < n_a/(n_a-1)*|x-c_a|^2, which strictly lowers
    // the objective. Unlike a batch reassignment this discounts the pull each
    // observation exerts on its own mean, which matters once d is large.
    // Leaves centers at the exact means of the new labels. Returns the move count.
    std::size_t transfer_pass(std::vector<double>& centers, std::vector<std::size_t>& labels) const {
        update_means(centers, labels);
        std::vector<std::size_t> sizes(k_, 0);
        for (std::size_t a : labels) ++sizes[a];
        std::size_t moves = 0;
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            const std::size_t a = labels[i];
            if (sizes[a] < 2) continue;
            const auto x = data_.row(i);
            auto center = [&](std::size_t c) { return std::span<double>(centers.data() + c * d_, d_); };
            const double na = static_cast<double>(sizes[a]);
            const double leave = na / (na - 1.0) * squared_dist(x, center(a));
            double best = leave * (1.0 - 1e-12);
            std::size_t to = a;
            for (std::size_t b = 0; b < k_; ++b) {
                if (b == a) continue;
                const double nb = static_cast<double>(sizes[b]);
                const double join = nb / (nb + 1.0) * squared_dist(x, center(b));
                if (join < best) {
                    best = join;
                    to = b;
                }
            }
            if (to == a) continue;
            const double nb = static_cast<double>(sizes[to]);
            auto ca = center(a);
            auto cb = center(to);
            for (std::size_t j = 0; j < d_; ++j) {
                ca[j] = (na * ca[j] - x[j]) / (na - 1.0);
                cb[j] = (nb * cb[j] + x[j]) / (nb + 1.0);
            }
            --sizes[a];
            ++sizes[to];
            labels[i] = to;
            ++moves;
        }
        if (moves > 0) update_means(centers, labels);
        return moves;
    }

    void update_means(std::vector<double>& centers, const std::vector<std::size_t>& labels) const {
        std::vector<double> sums(k_ * d_, 0.0);
        std::vector<std::size_t> counts(k_, 0);
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            const auto row = data_.row(i);
            double* s = sums.data() + labels[i] * d_;
            for (std::size_t j = 0; j < d_; ++j) s[j] += row[j];
            ++counts[labels[i]];
        }
        for (std::size_t c = 0; c < k_; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t j = 0; j < d_; ++j) centers[c * d_ + j] = sums[c * d_ + j] * inv;
        }
    }

    const DataMatrix& data_;
    std::size_t k_;
    std::size_t d_;
};

}  // namespace detail

/// Fills assign1/assign2/sizes of a knot set from its centers.
inline KnotSet make_knot_set(const DataMatrix& data, std::vector<double> centers,
                             std::size_t threads = 1) {
    KnotSet ks;
    ks.dim = data.cols();
    ks.centers = std::move(centers);
    const std::size_t k = ks.count();
    if (k == 0) throw UsageError("knot set needs at least one knot");
    if (k == 1) {
        ks.assign1.assign(data.rows(), 0);
        ks.assign2.assign(data.rows(), kNoKnot);
    } else {
        auto nn = two_nearest_knots(data, ks.centers, threads);
        ks.assign1 = std::move(nn.assign1);
        ks.assign2 = std::move(nn.assign2);
    }
    ks.sizes.assign(k, 0);
    for (std::size_t a : ks.assign1) ++ks.sizes[a];
    return ks;
}

/// Best-of-restarts k-means (Lloyd plus single-point transfers) with k-means++ seeding. Restart r is seeded
/// from derive_seed(cfg.seed, r); the winner is the lowest objective, ties
/// going to the lower restart index, so the result is thread-count independent.
inline KMeansResult kmeans(const DataMatrix& data, const KMeansConfig& cfg) {
    const std::size_t n = data.rows();
    const std::size_t k = cfg.k == 0 ? reference_knot_count(n) : cfg.k;
    if (k > n)
        throw UsageError("k = " + std::to_string(k) + " exceeds the number of observations " +
                         std::to_string(n));
    if (cfg.restarts == 0) throw UsageError("k-means needs at least one restart");
    if (cfg.max_iters == 0) throw UsageError("k-means needs at least one iteration");
    if (k > 1 && detail::count_distinct_rows(data, k) < k)
        throw DegenerateError("data has fewer than k = " + std::to_string(k) + " distinct points");

    const detail::LloydSolver solver(data, k);
    std::vector<detail::LloydRun> runs(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](std::size_t r) {
        runs[r] = solver.run(cfg, derive_seed(cfg.seed, r));
        runs[r].labels.clear();
        runs[r].labels.shrink_to_fit();
    });

    KMeansResult out;
    out.restart_objectives.reserve(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        out.restart_objectives.push_back(runs[r].objective);
        if (runs[r].objective < runs[out.best_restart].objective) out.best_restart = r;
    }
    auto& best = runs[out.best_restart];
    out.history = std::move(best.history);
    out.knots = make_knot_set(data, std::move(best.centers), cfg.threads);
    out.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        out.objective += squared_dist(data.row(i), out.knots.center(out.knots.assign1[i]));
    for (std::size_t s : out.knots.sizes)
        if (s == 0) throw DegenerateError("k-means produced an empty knot");
    return out;
}

/// (knot index, size) pairs in knot order.
inline std::vector<std::pair<std::size_t, std::size_t>> knot_size_histogram(const KnotSet& knots) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(knots.sizes.size());
    for (std::size_t j = 0; j < knots.sizes.size(); ++j) out.emplace_back(j, knots.sizes[j]);
    return out;
}

}  // namespace skelclus
