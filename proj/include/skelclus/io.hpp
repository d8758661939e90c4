#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bench/generators.hpp"
#include "core.hpp"
#include "skeleton.hpp"

namespace skelclus::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::size_t> parse_label(std::string_view s) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Shortest text that reads back to the same double.
inline std::string format_exact(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Numeric CSV contents. Rows and columns in error messages are 1-based and
/// count the header line.
struct CsvTable {
    DataMatrix data;
    std::optional<std::vector<std::size_t>> truth;  // last column when requested
    std::vector<std::string> header;                // empty when the file had none
};

/// Reads a comma-separated numeric table. A first line with any
/// non-numeric cell is taken as a header. With has_truth the last column
/// holds non-negative integer labels and is split off.
inline CsvTable read_csv(std::istream& in, bool has_truth = false) {
    std::string line;
    std::vector<double> values;
    std::vector<std::size_t> truth;
    std::vector<std::string> header;
    std::size_t cols = 0, rows = 0, line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_commas(line);
        if (first) {
            first = false;
            const bool numeric = std::all_of(cells.begin(), cells.end(),
                                             [](std::string_view c) { return detail::parse_double(c).has_value(); });
            if (!numeric) {
                for (auto c : cells) header.emplace_back(c);
                cols = cells.size();
                continue;
            }
        }
        if (cols == 0) cols = cells.size();
        if (cells.size() != cols)
            throw DataError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " columns, expected " + std::to_string(cols));
        const std::size_t features = has_truth ? cols - 1 : cols;
        for (std::size_t j = 0; j < features; ++j) {
            const auto v = detail::parse_double(cells[j]);
            if (!v || !std::isfinite(*v))
                throw DataError("non-numeric value '" + std::string(cells[j]) + "' at row " +
                                std::to_string(line_no) + ", column " + std::to_string(j + 1));
            values.push_back(*v);
        }
        if (has_truth) {
            const auto l = detail::parse_label(cells.back());
            if (!l)
                throw DataError("bad label '" + std::string(cells.back()) + "' at row " + std::to_string(line_no) +
                                ", column " + std::to_string(cols));
            truth.push_back(*l);
        }
        ++rows;
    }
    if (rows == 0) throw DataError("input has no data rows");
    if (has_truth && cols < 2) throw DataError("a truth column needs at least one feature column beside it");
    const std::size_t d = has_truth ? cols - 1 : cols;
    CsvTable t{DataMatrix(rows, d, std::move(values)), std::nullopt, std::move(header)};
    if (has_truth) t.truth = std::move(truth);
    return t;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

inline CsvTable read_csv_file(const std::string& path, bool has_truth = false) {
    auto in = open_input(path);
    return read_csv(in, has_truth);
}

/// Header x1..xd,label; one observation per row.
inline void write_dataset_csv(std::ostream& os, const bench::LabeledDataset& ds) {
    const std::size_t d = ds.data.cols();
    for (std::size_t j = 0; j < d; ++j) os << 'x' << j + 1 << ',';
    os << "label\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.data.row(i)) os << detail::format_exact(v) << ',';
        os << ds.truth[i] << '\n';
    }
}

inline void write_labels_csv(std::ostream& os, const std::vector<std::size_t>& labels) {
    os << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) os << i << ',' << labels[i] << '\n';
}

/// Last column of a CSV as integer labels (header skipped if present).
/// Works on labels.csv and on dataset files alike.
inline std::vector<std::size_t> read_label_column(std::istream& in) {
    std::string line;
    std::vector<std::size_t> out;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_commas(line);
        const auto l = detail::parse_label(cells.back());
        if (!l) {
            if (first) {
                first = false;
                continue;
            }
            throw DataError("bad label '" + std::string(cells.back()) + "' at row " + std::to_string(line_no) +
                            ", column " + std::to_string(cells.size()));
        }
        first = false;
        out.push_back(*l);
    }
    return out;
}

inline void write_knot_sizes_csv(std::ostream& os, const KnotSet& knots) {
    os << "knot,size\n";
    for (std::size_t j = 0; j < knots.sizes.size(); ++j) os << j << ',' << knots.sizes[j] << '\n';
}

// ---------------------------------------------------------------------------
// Flat key = value configuration

/// Ordered key/value pairs. '#' starts a comment; blank lines are ignored.
class FlatConfig {
public:
    static FlatConfig parse(std::istream& in) {
        FlatConfig cfg;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string_view s(line);
            if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
            s = detail::trim(s);
            if (s.empty()) continue;
            const auto eq = s.find('=');
            if (eq == std::string_view::npos)
                throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
            const auto key = detail::trim(s.substr(0, eq));
            if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
            cfg.set(std::string(key), std::string(detail::trim(s.substr(eq + 1))));
        }
        return cfg;
    }

    static FlatConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open config '" + path + "'");
        return parse(in);
    }

    void set(const std::string& key, std::string value) {
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        entries_.emplace_back(key, std::move(value));
    }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return std::nullopt;
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    void write(std::ostream& os) const {
        for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Real number, optionally written as a fraction such as -1/3.
inline double parse_number(std::string_view s, std::string_view what) {
    s = detail::trim(s);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = detail::parse_double(detail::trim(s.substr(0, slash)));
        const auto den = detail::parse_double(detail::trim(s.substr(slash + 1)));
        if (num && den && *den != 0.0) return *num / *den;
    } else if (const auto v = detail::parse_double(s)) {
        return *v;
    }
    throw UsageError("bad value '" + std::string(s) + "' for " + std::string(what));
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
    s = detail::trim(s);
    if (const auto v = detail::parse_label(s)) return *v;
    throw UsageError("bad count '" + std::string(s) + "' for " + std::string(what));
}

/// Comma-separated list; "a..b" expands an inclusive integer range.
inline std::vector<std::string> parse_list(std::string_view s) {
    std::vector<std::string> out;
    s = detail::trim(s);
    if (s.empty()) return out;
    for (auto cell : detail::split_commas(s)) {
        if (cell.empty()) continue;
        if (const auto dots = cell.find(".."); dots != std::string_view::npos) {
            const auto lo = detail::parse_label(detail::trim(cell.substr(0, dots)));
            const auto hi = detail::parse_label(detail::trim(cell.substr(dots + 2)));
            if (!lo || !hi || *lo > *hi) throw UsageError("bad range '" + std::string(cell) + "'");
            for (std::size_t v = *lo; v <= *hi; ++v) out.push_back(std::to_string(v));
        } else {
            out.emplace_back(cell);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG scatter of dims 1-2

inline std::string palette(std::size_t label) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                   "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[label % (sizeof colors / sizeof *colors)];
}

/// Points colored by label, knots as black squares, skeleton edges as grey
/// segments. Needs d >= 2.
inline void write_svg_plot(std::ostream& os, const DataMatrix& data, const std::vector<std::size_t>& labels,
                           const KnotSet* knots = nullptr, const EdgeList* edges = nullptr) {
    if (data.cols() < 2) throw UsageError("plot needs at least two dimensions");
    constexpr double size = 600.0, margin = 20.0;
    double xmin = data(0, 0), xmax = xmin, ymin = data(0, 1), ymax = ymin;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        xmin = std::min(xmin, data(i, 0));
        xmax = std::max(xmax, data(i, 0));
        ymin = std::min(ymin, data(i, 1));
        ymax = std::max(ymax, data(i, 1));
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = (size - 2 * margin) / span;
    auto px = [&](double x) { return detail::format_exact(std::round((margin + (x - xmin) * scale) * 100) / 100); };
    auto py = [&](double y) { return detail::format_exact(std::round((size - margin - (y - ymin) * scale) * 100) / 100); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g stroke=\"none\">\n";
    for (std::size_t i = 0; i < data.rows(); ++i)
        os << "<circle cx=\"" << px(data(i, 0)) << "\" cy=\"" << py(data(i, 1)) << "\" r=\"1.5\" fill=\""
           << palette(labels[i]) << "\"/>\n";
    os << "</g>\n";
    if (knots && edges) {
        os << "<g stroke=\"#444\" stroke-width=\"0.8\">\n";
        for (const auto& [j, l] : edges->pairs) {
            const auto a = knots->center(j);
            const auto b = knots->center(l);
            os << "<line x1=\"" << px(a[0]) << "\" y1=\"" << py(a[1]) << "\" x2=\"" << px(b[0]) << "\" y2=\""
               << py(b[1]) << "\"/>\n";
        }
        os << "</g>\n";
    }
    if (knots) {
        os << "<g fill=\"black\">\n";
        for (std::size_t j = 0; j < knots->count(); ++j) {
            const auto c = knots->center(j);
            os << "<rect x=\"" << px(c[0]) << "\" y=\"" << py(c[1]) << "\" width=\"4\" height=\"4\" "
               << "transform=\"translate(-2,-2)\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

}  // namespace skelclus::io
