#pragma once

// Failure cascade projection: which assets are affected, and how remotely,
// when a given asset goes down. An edge X -[:DEPENDS_ON]-> Y means X needs
// Y, so the traversal walks dependency edges in reverse from the failed
// root. Each affected asset is reported once, at its minimal hop distance.

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/graph.hpp"

namespace assetgraph::analytics {

struct CascadeOptions {
    std::vector<std::string> dependency_types = {"DEPENDS_ON"};
    std::size_t max_depth = 0;    // 0 = unbounded
};

struct CascadeReport {
    NodeId root = 0;
    std::vector<std::pair<NodeId, std::size_t>> affected;    // (node, hop), hop >= 1
    std::vector<std::string> traversed_types;
};

inline CascadeReport cascade(const PropertyGraph& graph, NodeId root,
                             const CascadeOptions& opts = {}) {
    if (!graph.has_node(root)) throw ValidationError("cascade root node does not exist");

    // reverse adjacency: for a failed node, its dependants come next
    std::map<NodeId, std::vector<NodeId>> rev;
    for (const auto& [eid, edge] : graph.edges()) {
        bool wanted = false;
        for (const auto& t : opts.dependency_types)
            if (edge.type == t) {
                wanted = true;
                break;
            }
        if (wanted) rev[edge.dst].push_back(edge.src);
    }

    std::map<NodeId, std::size_t> hop;
    hop[root] = 0;
    std::deque<NodeId> frontier{root};
    while (!frontier.empty()) {
        const NodeId at = frontier.front();
        frontier.pop_front();
        const std::size_t next_hop = hop[at] + 1;
        if (opts.max_depth != 0 && next_hop > opts.max_depth) continue;
        auto it = rev.find(at);
        if (it == rev.end()) continue;
        for (NodeId up : it->second) {
            if (hop.count(up)) continue;
            hop[up] = next_hop;
            frontier.push_back(up);
        }
    }

    CascadeReport report;
    report.root = root;
    report.traversed_types = opts.dependency_types;
    for (const auto& [id, h] : hop)
        if (id != root) report.affected.emplace_back(id, h);
    std::sort(report.affected.begin(), report.affected.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    return report;
}

} // namespace assetgraph::analytics
