#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph {

using NodeId = std::uint64_t;
using EdgeId = std::uint64_t;

enum class Provenance { DataDerived, LlmDerived };

inline const char* kLlmSourceTag = "LLM-derived";

using PropertyMap = std::map<std::string, Scalar>;

struct Node {
    NodeId id = 0;
    std::set<std::string> labels;
    PropertyMap properties;
    Provenance provenance = Provenance::DataDerived;

    bool has_label(const std::string& l) const { return labels.count(l) > 0; }
    const Scalar* property(const std::string& key) const {
        auto it = properties.find(key);
        return it == properties.end() ? nullptr : &it->second;
    }
};

struct Edge {
    EdgeId id = 0;
    std::string type;
    NodeId src = 0;
    NodeId dst = 0;
    PropertyMap properties;

    const Scalar* property(const std::string& key) const {
        auto it = properties.find(key);
        return it == properties.end() ? nullptr : &it->second;
    }
};

enum class Direction { Out, In, Both };

struct NeighborHit {
    EdgeId edge;
    NodeId node;
};

inline bool is_edge_type_name(const std::string& t) {
    if (t.empty()) return false;
    if (!(t[0] >= 'A' && t[0] <= 'Z')) return false;
    for (char c : t)
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

// In-process typed property graph. Nodes carry label sets and scalar
// properties; edges are typed and directed. Exact-match secondary indices
// per label and per (label, property) back the lookup operations.
//
// Concurrency contract: single writer, multiple readers. Mutations require
// exclusive access; the class itself holds no locks and spawns no threads.
class PropertyGraph {
public:
    // ---- mutation ----

    NodeId create_node(std::set<std::string> labels, PropertyMap properties,
                       Provenance provenance = Provenance::DataDerived) {
        if (labels.empty()) throw ValidationError("create_node: label set must be nonempty");
        for (const auto& l : labels)
            if (l.empty()) throw ValidationError("create_node: empty label name");
        if (provenance == Provenance::LlmDerived) {
            auto it = properties.find("source");
            if (it == properties.end()) properties.emplace("source", Scalar(kLlmSourceTag));
        }
        NodeId id = next_node_id_++;
        Node node{id, std::move(labels), std::move(properties), provenance};
        index_node(node);
        nodes_.emplace(id, std::move(node));
        ++version_;
        return id;
    }

    EdgeId create_edge(std::string type, NodeId src, NodeId dst, PropertyMap properties = {}) {
        if (!is_edge_type_name(type))
            throw ValidationError("create_edge: type must be a nonempty uppercase-snake name, got '" +
                                  type + "'");
        if (!nodes_.count(src))
            throw ValidationError("create_edge: unknown src node " + std::to_string(src));
        if (!nodes_.count(dst))
            throw ValidationError("create_edge: unknown dst node " + std::to_string(dst));
        EdgeId id = next_edge_id_++;
        Edge edge{id, std::move(type), src, dst, std::move(properties)};
        out_edges_[src].push_back(id);
        in_edges_[dst].push_back(id);
        edges_.emplace(id, std::move(edge));
        ++version_;
        return id;
    }

    // Removes the node and every incident edge.
    void delete_node(NodeId id) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw ValidationError("delete_node: unknown node " + std::to_string(id));
        std::vector<EdgeId> incident;
        collect(out_edges_, id, incident);
        collect(in_edges_, id, incident);
        std::sort(incident.begin(), incident.end());
        incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
        for (EdgeId e : incident) delete_edge(e);
        unindex_node(it->second);
        out_edges_.erase(id);
        in_edges_.erase(id);
        nodes_.erase(it);
        ++version_;
    }

    void delete_edge(EdgeId id) {
        auto it = edges_.find(id);
        if (it == edges_.end()) throw ValidationError("delete_edge: unknown edge " + std::to_string(id));
        erase_from(out_edges_, it->second.src, id);
        erase_from(in_edges_, it->second.dst, id);
        edges_.erase(it);
        ++version_;
    }

    void set_property(NodeId id, const std::string& key, Scalar value) {
        Node& node = mutable_node(id);
        unindex_node(node);
        node.properties[key] = std::move(value);
        index_node(node);
        ++version_;
    }

    // Snapshot machinery: re-insert an element under its original id.
    void restore_node(Node node) {
        if (node.labels.empty()) throw ValidationError("restore_node: label set must be nonempty");
        if (nodes_.count(node.id))
            throw ValidationError("restore_node: duplicate node id " + std::to_string(node.id));
        next_node_id_ = std::max(next_node_id_, node.id + 1);
        index_node(node);
        nodes_.emplace(node.id, std::move(node));
        ++version_;
    }

    void restore_edge(Edge edge) {
        if (!nodes_.count(edge.src) || !nodes_.count(edge.dst))
            throw ValidationError("restore_edge: dangling endpoint on edge " +
                                  std::to_string(edge.id));
        if (edges_.count(edge.id))
            throw ValidationError("restore_edge: duplicate edge id " + std::to_string(edge.id));
        next_edge_id_ = std::max(next_edge_id_, edge.id + 1);
        out_edges_[edge.src].push_back(edge.id);
        in_edges_[edge.dst].push_back(edge.id);
        edges_.emplace(edge.id, std::move(edge));
        ++version_;
    }

    // ---- lookup ----

    bool has_node(NodeId id) const { return nodes_.count(id) > 0; }
    // Bumped by every mutation; lets callers invalidate derived caches.
    std::uint64_t version() const { return version_; }
    bool has_edge(EdgeId id) const { return edges_.count(id) > 0; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Node& node(NodeId id) const {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw ValidationError("unknown node " + std::to_string(id));
        return it->second;
    }

    const Edge& edge(EdgeId id) const {
        auto it = edges_.find(id);
        if (it == edges_.end()) throw ValidationError("unknown edge " + std::to_string(id));
        return it->second;
    }

    // Ascending-id iteration; deterministic across runs.
    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }

    std::vector<NodeId> nodes_by_label(const std::string& label) const {
        auto it = label_index_.find(label);
        if (it == label_index_.end()) return {};
        return {it->second.begin(), it->second.end()};
    }

    std::vector<NodeId> nodes_by_property(const std::string& label, const std::string& property,
                                          const Scalar& value) const {
        auto li = property_index_.find(label);
        if (li == property_index_.end()) return {};
        auto pi = li->second.find(property);
        if (pi == li->second.end()) return {};
        auto vi = pi->second.find(value);
        if (vi == pi->second.end()) return {};
        return {vi->second.begin(), vi->second.end()};
    }

    // Edges incident to `id`, optionally restricted to one type. The reported
    // node is the far endpoint (for Both, a self-loop reports twice).
    std::vector<NeighborHit> neighbors(NodeId id, const std::string& type_filter = "",
                                       Direction dir = Direction::Out) const {
        std::vector<NeighborHit> hits;
        auto scan = [&](const std::unordered_map<NodeId, std::vector<EdgeId>>& adj, bool outgoing) {
            auto it = adj.find(id);
            if (it == adj.end()) return;
            for (EdgeId eid : it->second) {
                const Edge& e = edges_.at(eid);
                if (!type_filter.empty() && e.type != type_filter) continue;
                hits.push_back({eid, outgoing ? e.dst : e.src});
            }
        };
        if (dir == Direction::Out || dir == Direction::Both) scan(out_edges_, true);
        if (dir == Direction::In || dir == Direction::Both) scan(in_edges_, false);
        std::sort(hits.begin(), hits.end(),
                  [](const NeighborHit& a, const NeighborHit& b) { return a.edge < b.edge; });
        return hits;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(label_index_.size());
        for (const auto& [l, ids] : label_index_)
            if (!ids.empty()) out.push_back(l);
        return out;
    }

    std::map<std::string, std::size_t> node_census() const {
        std::map<std::string, std::size_t> census;
        for (const auto& [id, n] : nodes_)
            for (const auto& l : n.labels) census[l]++;
        return census;
    }

    std::map<std::string, std::size_t> edge_census() const {
        std::map<std::string, std::size_t> census;
        for (const auto& [id, e] : edges_) census[e.type]++;
        return census;
    }

    // External id rendering; ids are opaque strings outside the engine.
    static std::string external_id(std::uint64_t id) { return std::to_string(id); }

private:
    Node& mutable_node(NodeId id) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw ValidationError("unknown node " + std::to_string(id));
        return it->second;
    }

    void index_node(const Node& node) {
        for (const auto& l : node.labels) {
            label_index_[l].insert(node.id);
            for (const auto& [key, value] : node.properties)
                property_index_[l][key][value].insert(node.id);
        }
    }

    void unindex_node(const Node& node) {
        for (const auto& l : node.labels) {
            label_index_[l].erase(node.id);
            for (const auto& [key, value] : node.properties) {
                auto& by_value = property_index_[l][key];
                auto it = by_value.find(value);
                if (it != by_value.end()) {
                    it->second.erase(node.id);
                    if (it->second.empty()) by_value.erase(it);
                }
            }
        }
    }

    static void collect(const std::unordered_map<NodeId, std::vector<EdgeId>>& adj, NodeId id,
                        std::vector<EdgeId>& out) {
        auto it = adj.find(id);
        if (it != adj.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }

    static void erase_from(std::unordered_map<NodeId, std::vector<EdgeId>>& adj, NodeId id,
                           EdgeId eid) {
        auto it = adj.find(id);
        if (it == adj.end()) return;
        auto& v = it->second;
        v.erase(std::remove(v.begin(), v.end(), eid), v.end());
    }

    std::map<NodeId, Node> nodes_;
    std::map<EdgeId, Edge> edges_;
    std::unordered_map<NodeId, std::vector<EdgeId>> out_edges_;
    std::unordered_map<NodeId, std::vector<EdgeId>> in_edges_;
    std::unordered_map<std::string, std::set<NodeId>> label_index_;
    std::unordered_map<std::string,
                       std::unordered_map<std::string, std::map<Scalar, std::set<NodeId>>>>
        property_index_;
    NodeId next_node_id_ = 1;
    EdgeId next_edge_id_ = 1;
    std::uint64_t version_ = 0;
};

} // namespace assetgraph
