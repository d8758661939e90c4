#pragma once

// Reference implementations used as oracles: naive kernel sums, textbook
// agglomeration and an exact planar Delaunay test. Written for clarity
// rather than speed and independent of the library code they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include <skelclus/core.hpp>
#include <skelclus/random.hpp>
#include <skelclus/segmentation.hpp>
#include <skelclus/skeleton.hpp>

#include "support.hpp"

namespace testing_support {

using skelclus::CondensedMatrix;
using skelclus::Dendrogram;
using skelclus::Edge;
using skelclus::LinkageKind;
using skelclus::Merge;

// Naive references: every quantity is rebuilt from coordinates with plain
// loops, including projections, spreads and kernel sums.

inline double gauss(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }
inline double box(double u) { return std::abs(u) <= 1.0 ? 0.5 : 0.0; }

struct Proj {
    double s;     // position along the central line, length units from c_j
    double perp;  // distance to the line
};

inline Proj naive_project(const double* x, const double* cj, const double* cl, std::size_t d) {
    double len2 = 0.0, dot = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        len2 += (cl[a] - cj[a]) * (cl[a] - cj[a]);
        dot += (x[a] - cj[a]) * (cl[a] - cj[a]);
    }
    const double t = dot / len2;
    double perp2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        const double foot = cj[a] + t * (cl[a] - cj[a]);
        perp2 += (x[a] - foot) * (x[a] - foot);
    }
    return {t * std::sqrt(len2), std::sqrt(perp2)};
}

inline double naive_sd(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double naive_face(const DataMatrix& data, const KnotSet& ks, Edge e, bool gaussian, double rate) {
    const std::size_t d = data.cols();
    const double* cj = &ks.centers[e.first * d];
    const double* cl = &ks.centers[e.second * d];
    std::vector<double> s;
    for (std::size_t i = 0; i < data.rows(); ++i)
        if (ks.assign1[i] == e.first || ks.assign1[i] == e.second)
            s.push_back(naive_project(data.row(i).data(), cj, cl, d).s);
    const double h = 4.0 / 3.0 * naive_sd(s) * std::pow(static_cast<double>(s.size()), rate);
    const double mid = 0.5 * std::sqrt(testing_support::plain_dist2(cj, cl, d));
    double sum = 0.0;
    for (double x : s) sum += gaussian ? gauss((x - mid) / h) : box((x - mid) / h);
    return sum / (static_cast<double>(data.rows()) * h);
}

inline double naive_tube(const DataMatrix& data, const KnotSet& ks, Edge e, bool gaussian, double rate, double radius,
                  std::size_t grid) {
    const std::size_t d = data.cols();
    const double* cj = &ks.centers[e.first * d];
    const double* cl = &ks.centers[e.second * d];
    std::vector<double> s;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const Proj p = naive_project(data.row(i).data(), cj, cl, d);
        if (p.perp <= radius) s.push_back(p.s);
    }
    const double h = 4.0 / 3.0 * naive_sd(s) * std::pow(static_cast<double>(s.size()), rate);
    const double len = std::sqrt(testing_support::plain_dist2(cj, cl, d));
    double best = 1e300;
    for (std::size_t g = 0; g < grid; ++g) {
        const double at = len * static_cast<double>(g) / static_cast<double>(grid - 1);
        double sum = 0.0;
        for (double x : s) sum += gaussian ? gauss((x - at) / h) : box((x - at) / h);
        best = std::min(best, sum / (static_cast<double>(data.rows()) * h));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Agglomeration

using Members = std::set<std::size_t>;

struct NaiveMerge {
    Members a, b;
    double height;
};

// Textbook O(k^3) agglomeration: linkage recomputed from the original
// distances over cluster members at every step.
inline std::vector<NaiveMerge> naive_agglomerate(const CondensedMatrix& dist, LinkageKind linkage) {
    const std::size_t k = dist.size();
    std::vector<Members> clusters;
    for (std::size_t i = 0; i < k; ++i) clusters.push_back({i});
    auto link = [&](const Members& x, const Members& y) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
        for (std::size_t i : x)
            for (std::size_t j : y) {
                const double v = dist.at(i, j);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
            }
        switch (linkage) {
            case LinkageKind::single: return lo;
            case LinkageKind::complete: return hi;
            case LinkageKind::average: return sum / static_cast<double>(x.size() * y.size());
        }
        return 0.0;
    };
    std::vector<NaiveMerge> out;
    while (clusters.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double v = link(clusters[i], clusters[j]);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        out.push_back({clusters[bi], clusters[bj], best});
        clusters[bi].insert(clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return out;
}

// Member sets of every cluster id in a dendrogram.
inline std::vector<Members> expand(const Dendrogram& d) {
    std::vector<Members> sets;
    for (std::size_t i = 0; i < d.leaves; ++i) sets.push_back({i});
    for (const Merge& m : d.merges) {
        Members u = sets[m.a];
        u.insert(sets[m.b].begin(), sets[m.b].end());
        sets.push_back(u);
    }
    return sets;
}

// ---------------------------------------------------------------------------
// Planar Delaunay

// Exact Delaunay edges of points in general position: an edge belongs to a
// triangle whose circumcircle holds no other point.
inline std::set<Edge> exact_delaunay(const std::vector<double>& p) {
    const std::size_t k = p.size() / 2;
    std::set<Edge> out;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            for (std::size_t c = b + 1; c < k; ++c) {
                const double ax = p[2 * a], ay = p[2 * a + 1];
                const double bx = p[2 * b], by = p[2 * b + 1];
                const double cx = p[2 * c], cy = p[2 * c + 1];
                const double det = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if (std::abs(det) < 1e-12) continue;
                const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
                const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det;
                const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det;
                const double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
                bool empty = true;
                for (std::size_t m = 0; m < k && empty; ++m) {
                    if (m == a || m == b || m == c) continue;
                    const double dx = p[2 * m] - ux, dy = p[2 * m + 1] - uy;
                    if (dx * dx + dy * dy < r2 * (1 - 1e-9)) empty = false;
                }
                if (empty) {
                    out.insert({a, b});
                    out.insert({a, c});
                    out.insert({b, c});
                }
            }
    return out;
}

// ---------------------------------------------------------------------------
// Rigid transforms

inline DataMatrix transform(const DataMatrix& m, const Eigen::MatrixXd& q, std::size_t extra_zero_dims) {
    const std::size_t d = m.cols();
    std::vector<double> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Eigen::VectorXd x(d);
        for (std::size_t j = 0; j < d; ++j) x(j) = m(i, j);
        const Eigen::VectorXd y = q * x;
        for (std::size_t j = 0; j < d; ++j) out.push_back(y(j));
        for (std::size_t j = 0; j < extra_zero_dims; ++j) out.push_back(0.0);
    }
    return DataMatrix(m.rows(), d + extra_zero_dims, out);
}

inline std::vector<double> transform_centers(const KnotSet& ks, const Eigen::MatrixXd& q, std::size_t extra) {
    const DataMatrix c(ks.count(), ks.dim, ks.centers);
    const auto t = transform(c, q, extra);
    return {t.values().begin(), t.values().end()};
}

inline Eigen::MatrixXd random_rotation(std::size_t d, std::uint64_t seed) {
    Rng rng(RngSeed{seed});
    Eigen::MatrixXd g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ();
}

}  // namespace testing_support
