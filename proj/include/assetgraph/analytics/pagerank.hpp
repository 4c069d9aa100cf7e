#pragma once

// Damped PageRank by power iteration over a typed edge-induced subgraph.
// Dangling mass is redistributed uniformly, so the score vector sums to one
// at every iteration; iteration stops when the L1 residual drops below
// tolerance or the iteration budget runs out.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/graph.hpp"

namespace assetgraph::analytics {

struct PagerankOptions {
    // edge types walked src -> dst; empty lists mean "no edges of that role"
    std::vector<std::string> forward_types;
    // edge types walked dst -> src (dependency reversal)
    std::vector<std::string> reversed_types;
    // edge types walked both ways
    std::vector<std::string> undirected_types;
    // restrict the ranked node universe to these labels; empty = all nodes
    std::set<std::string> restrict_to_labels;
    double damping = 0.85;
    std::size_t max_iterations = 200;
    double tolerance = 1e-8;
};

struct CriticalityRanking {
    std::vector<std::pair<NodeId, double>> entries;    // descending score
    double damping = 0.85;
    std::size_t iterations = 0;
    double residual = 0.0;
};

inline CriticalityRanking pagerank(const PropertyGraph& graph, const PagerankOptions& opts) {
    if (!(opts.damping > 0.0 && opts.damping < 1.0))
        throw ValidationError("damping must lie in (0,1)");

    std::vector<NodeId> universe;
    for (const auto& [id, node] : graph.nodes()) {
        if (opts.restrict_to_labels.empty()) {
            universe.push_back(id);
            continue;
        }
        for (const auto& l : opts.restrict_to_labels)
            if (node.has_label(l)) {
                universe.push_back(id);
                break;
            }
    }
    CriticalityRanking out;
    out.damping = opts.damping;
    if (universe.empty()) return out;

    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < universe.size(); ++i) pos[universe[i]] = i;
    const std::size_t n = universe.size();

    auto role_of = [&](const std::string& type) {
        int role = 0;
        if (std::count(opts.forward_types.begin(), opts.forward_types.end(), type)) role |= 1;
        if (std::count(opts.reversed_types.begin(), opts.reversed_types.end(), type)) role |= 2;
        if (std::count(opts.undirected_types.begin(), opts.undirected_types.end(), type))
            role |= 3;
        return role;
    };
    const bool no_filter = opts.forward_types.empty() && opts.reversed_types.empty() &&
                           opts.undirected_types.empty();

    // adjacency as (from, to) index pairs; parallel edges keep multiplicity
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::size_t> outdeg(n, 0);
    for (const auto& [eid, edge] : graph.edges()) {
        auto s = pos.find(edge.src);
        auto d = pos.find(edge.dst);
        if (s == pos.end() || d == pos.end()) continue;
        const int role = no_filter ? 1 : role_of(edge.type);
        if (role & 1) {
            adj[s->second].push_back(d->second);
            ++outdeg[s->second];
        }
        if (role & 2) {
            adj[d->second].push_back(s->second);
            ++outdeg[d->second];
        }
    }

    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    std::size_t iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (outdeg[i] == 0) dangling += rank[i];
        const double base =
            (1.0 - opts.damping) / static_cast<double>(n) +
            opts.damping * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (std::size_t i = 0; i < n; ++i) {
            if (outdeg[i] == 0) continue;
            const double share = opts.damping * rank[i] / static_cast<double>(outdeg[i]);
            for (std::size_t j : adj[i]) next[j] += share;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - rank[i]);
        rank.swap(next);
        if (residual < opts.tolerance) {
            ++iter;
            break;
        }
    }

    out.iterations = iter;
    out.residual = residual;
    out.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.entries.emplace_back(universe[i], rank[i]);
    std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

} // namespace assetgraph::analytics
