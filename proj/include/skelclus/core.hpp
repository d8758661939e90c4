#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skelclus {

/// Failure categories. The CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorKind { usage, data, degenerate };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

inline constexpr std::size_t kNoKnot = std::numeric_limits<std::size_t>::max();

/// n x d observation matrix, one observation per row, stored row-major.
/// Immutable after construction; every entry is finite.
class DataMatrix {
public:
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (rows_ == 0 || cols_ == 0)
            throw UsageError("data matrix needs at least one row and one column");
        if (values_.size() != rows_ * cols_)
            throw UsageError("data matrix size mismatch: expected " + std::to_string(rows_ * cols_) +
                             " values, got " + std::to_string(values_.size()));
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw DataError("non-finite value at row " + std::to_string(i / cols_ + 1) + ", column " +
                                std::to_string(i % cols_ + 1));
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

/// Squared Euclidean distance. Four independent accumulators let the compiler
/// vectorise the loop; the summation order is fixed, so results are reproducible.
inline double squared_dist(std::span<const double> a, std::span<const double> b) noexcept {
    const std::size_t d = a.size();
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t j = 0;
    for (; j + 4 <= d; j += 4) {
        const double e0 = a[j] - b[j];
        const double e1 = a[j + 1] - b[j + 1];
        const double e2 = a[j + 2] - b[j + 2];
        const double e3 = a[j + 3] - b[j + 3];
        s0 += e0 * e0;
        s1 += e1 * e1;
        s2 += e2 * e2;
        s3 += e3 * e3;
    }
    for (; j < d; ++j) {
        const double e = a[j] - b[j];
        s0 += e * e;
    }
    return (s0 + s1) + (s2 + s3);
}

inline double euclidean_dist(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw UsageError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    return std::sqrt(squared_dist(a, b));
}

/// Knots (k x d centers) plus, for every observation, its nearest and
/// second-nearest knot and the resulting Voronoi cell sizes.
struct KnotSet {
    std::size_t dim = 0;
    std::vector<double> centers;       // k x d, row-major
    std::vector<std::size_t> assign1;  // nearest knot per observation
    std::vector<std::size_t> assign2;  // second-nearest knot, kNoKnot when k == 1
    std::vector<std::size_t> sizes;    // observations per cell

    std::size_t count() const noexcept { return dim == 0 ? 0 : centers.size() / dim; }
    std::size_t observations() const noexcept { return assign1.size(); }
    std::span<const double> center(std::size_t j) const noexcept {
        return {centers.data() + j * dim, dim};
    }
};

}  // namespace skelclus
