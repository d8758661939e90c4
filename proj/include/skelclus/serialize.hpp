#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "segmentation.hpp"
#include "skeleton.hpp"

namespace skelclus {

/// {"knots": [[...]], "edges": [[j, l]], "evidence": [...], "weights": [...], "weight_kind": "..."}
inline nlohmann::json skeleton_to_json(const SkeletonGraph& g) {
    nlohmann::json knots = nlohmann::json::array();
    for (std::size_t j = 0; j < g.knots.count(); ++j) {
        const auto c = g.knots.center(j);
        knots.push_back(std::vector<double>(c.begin(), c.end()));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : g.edges.pairs) edges.push_back({a, b});
    return {
        {"knots", std::move(knots)},
        {"edges", std::move(edges)},
        {"evidence", g.edges.evidence},
        {"weights", g.weights},
        {"weight_kind", std::string(to_string(g.weight_kind))},
    };
}

/// Restores knots, edges and weights. Per-observation assignments are not
/// part of the document; callers recompute them against their data.
inline SkeletonGraph skeleton_from_json(const nlohmann::json& doc) {
    try {
        SkeletonGraph g;
        const auto& knots = doc.at("knots");
        if (!knots.is_array() || knots.empty()) throw DataError("skeleton document has no knots");
        g.knots.dim = knots.at(0).size();
        if (g.knots.dim == 0) throw DataError("skeleton knots have zero dimension");
        for (const auto& row : knots) {
            if (row.size() != g.knots.dim) throw DataError("skeleton knots have ragged rows");
            for (const auto& v : row) g.knots.centers.push_back(v.get<double>());
        }
        for (const auto& e : doc.at("edges")) {
            auto a = e.at(0).get<std::size_t>();
            auto b = e.at(1).get<std::size_t>();
            if (a > b) std::swap(a, b);
            g.edges.pairs.emplace_back(a, b);
        }
        g.edges.evidence = doc.at("evidence").get<std::vector<std::size_t>>();
        g.weights = doc.at("weights").get<std::vector<double>>();
        g.weight_kind = parse_weight_kind(doc.at("weight_kind").get<std::string>());
        if (g.edges.evidence.size() != g.edges.pairs.size() || g.weights.size() != g.edges.pairs.size())
            throw DataError("skeleton document: edges, evidence and weights differ in length");
        for (const auto& [a, b] : g.edges.pairs)
            if (a == b || b >= g.knots.count()) throw DataError("skeleton document: edge out of range");
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed skeleton document: ") + e.what());
    }
}

inline nlohmann::json dendrogram_to_json(const Dendrogram& d) {
    nlohmann::json merges = nlohmann::json::array();
    for (const Merge& m : d.merges) merges.push_back({m.a, m.b, m.height});
    return {
        {"leaves", d.leaves},
        {"linkage", std::string(to_string(d.linkage))},
        {"merges", std::move(merges)},
    };
}

}  // namespace skelclus
