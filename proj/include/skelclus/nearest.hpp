#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace skelclus {

/// Dimensions up to which knot queries go through a k-d tree; above it a
/// linear scan is used.
inline constexpr std::size_t kKdTreeMaxDim = 20;

struct KnotHit {
    double dist2 = std::numeric_limits<double>::infinity();
    std::size_t index = kNoKnot;

    // Lexicographic on (distance, index): ties go to the lower knot index.
    friend bool operator<(const KnotHit& a, const KnotHit& b) noexcept {
        return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
    }
};

struct TwoHits {
    KnotHit first;
    KnotHit second;

    void offer(const KnotHit& h) noexcept {
        if (h < first) {
            second = first;
            first = h;
        } else if (h < second) {
            second = h;
        }
    }
};

/// Exact nearest / second-nearest knot lookup over a fixed set of centers.
class KnotSearch {
public:
    KnotSearch(std::span<const double> centers, std::size_t dim)
        : centers_(centers), dim_(dim), count_(dim == 0 ? 0 : centers.size() / dim) {
        if (dim_ == 0 || count_ == 0 || centers_.size() != count_ * dim_)
            throw UsageError("knot search needs a non-empty k x d center matrix");
        if (dim_ <= kKdTreeMaxDim && count_ > kLeafSize) build_tree();
    }

    std::size_t count() const noexcept { return count_; }
    bool uses_tree() const noexcept { return !nodes_.empty(); }

    TwoHits two_nearest(std::span<const double> q) const noexcept {
        TwoHits best;
        if (nodes_.empty()) {
            for (std::size_t j = 0; j < count_; ++j) best.offer({squared_dist(q, center(j)), j});
        } else {
            search(0, q, best);
        }
        return best;
    }

    KnotHit nearest(std::span<const double> q) const noexcept { return two_nearest(q).first; }

private:
    static constexpr std::size_t kLeafSize = 8;

    struct Node {
        std::size_t axis = 0;
        double split = 0.0;
        std::size_t left = 0;   // child node ids, 0 for leaves
        std::size_t right = 0;
        std::size_t begin = 0;  // bucket range into order_
        std::size_t end = 0;
    };

    std::span<const double> center(std::size_t j) const noexcept {
        return centers_.subspan(j * dim_, dim_);
    }

    void build_tree() {
        order_.resize(count_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        nodes_.reserve(2 * count_ / kLeafSize + 2);
        build(0, count_);
    }

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back({0, 0.0, 0, 0, begin, end});
        if (end - begin <= kLeafSize) return id;

        std::size_t axis = 0;
        double widest = -1.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t p = begin; p < end; ++p) {
                const double v = centers_[order_[p] * dim_ + a];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                axis = a;
            }
        }
        if (widest <= 0.0) return id;  // all coincident, keep as a leaf

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             return centers_[a * dim_ + axis] < centers_[b * dim_ + axis];
                         });
        const double split = centers_[order_[mid] * dim_ + axis];
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(std::size_t id, std::span<const double> q, TwoHits& best) const noexcept {
        const Node& node = nodes_[id];
        if (node.left == 0) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                const std::size_t j = order_[p];
                best.offer({squared_dist(q, center(j)), j});
            }
            return;
        }
        // Left subtree holds coordinates <= split, right holds >= split.
        const double diff = q[node.axis] - node.split;
        const std::size_t near = diff <= 0.0 ? node.left : node.right;
        const std::size_t far = diff <= 0.0 ? node.right : node.left;
        search(near, q, best);
        // The plane gap is a lower bound on every distance across it. Only a
        // strictly larger gap prunes, so equal-distance knots with a lower
        // index are still seen.
        if (diff * diff <= best.second.dist2) search(far, q, best);
    }

    std::span<const double> centers_;
    std::size_t dim_;
    std::size_t count_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

struct TwoNearest {
    std::vector<std::size_t> assign1;
    std::vector<std::size_t> assign2;
};

/// Nearest and second-nearest knot for every row of `points`, ties broken by
/// the lower knot index.
inline TwoNearest two_nearest_knots(const DataMatrix& points, std::span<const double> centers,
                                    std::size_t threads = 1) {
    const std::size_t d = points.cols();
    if (centers.size() % d != 0)
        throw UsageError("center matrix width does not match data dimension");
    if (centers.size() / d < 2) throw UsageError("two_nearest_knots needs at least two knots");

    const KnotSearch search(centers, d);
    TwoNearest out;
    out.assign1.resize(points.rows());
    out.assign2.resize(points.rows());
    parallel_for(points.rows(), threads, [&](std::size_t i) {
        const TwoHits h = search.two_nearest(points.row(i));
        out.assign1[i] = h.first.index;
        out.assign2[i] = h.second.index;
    });
    return out;
}

}  // namespace skelclus
