#pragma once

// Schema summary derived from a live graph: labels with typed properties,
// edge types with observed endpoint label pairs, and sampled property values.
// Feeds the text-to-Cypher prompt and the CLI `schema` output.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "assetgraph/graph.hpp"

namespace assetgraph {

struct SchemaDescriptor {
    // label -> property name -> type name ("Text", "Integer", ...).
    // A property observed with several types is reported as "Mixed".
    std::map<std::string, std::map<std::string, std::string>> node_properties;
    // edge type -> property name -> type name
    std::map<std::string, std::map<std::string, std::string>> edge_properties;
    // edge type -> set of (src label, dst label) pairs
    std::map<std::string, std::set<std::pair<std::string, std::string>>> edge_endpoints;
    // label -> property -> up to `max_samples` distinct rendered values
    std::map<std::string, std::map<std::string, std::vector<std::string>>> samples;
};

namespace schema_detail {

inline std::string type_name(const Scalar& v) {
    switch (v.kind()) {
        case Scalar::Kind::Text: return "Text";
        case Scalar::Kind::Integer: return "Integer";
        case Scalar::Kind::Float: return "Float";
        case Scalar::Kind::Boolean: return "Boolean";
        case Scalar::Kind::Time: return "Time";
    }
    return "Text";
}

inline void merge_type(std::map<std::string, std::string>& into, const std::string& prop,
                       const std::string& type) {
    auto it = into.find(prop);
    if (it == into.end())
        into.emplace(prop, type);
    else if (it->second != type)
        it->second = "Mixed";
}

} // namespace schema_detail

inline SchemaDescriptor derive_schema(const PropertyGraph& graph, std::size_t max_samples = 5) {
    SchemaDescriptor schema;
    std::map<std::string, std::map<std::string, std::set<std::string>>> sample_sets;
    for (const auto& [id, node] : graph.nodes()) {
        for (const auto& label : node.labels) {
            auto& props = schema.node_properties[label];
            auto& label_samples = sample_sets[label];
            for (const auto& [name, value] : node.properties) {
                schema_detail::merge_type(props, name, schema_detail::type_name(value));
                label_samples[name].insert(value.render());
            }
        }
    }
    for (const auto& [id, edge] : graph.edges()) {
        auto& props = schema.edge_properties[edge.type];
        for (const auto& [name, value] : edge.properties)
            schema_detail::merge_type(props, name, schema_detail::type_name(value));
        const Node& src = graph.node(edge.src);
        const Node& dst = graph.node(edge.dst);
        for (const auto& sl : src.labels)
            for (const auto& dl : dst.labels) schema.edge_endpoints[edge.type].insert({sl, dl});
        if (!schema.edge_properties.count(edge.type)) schema.edge_properties[edge.type] = {};
    }
    // deterministic sampling: the lexicographically first distinct values
    for (auto& [label, per_prop] : sample_sets)
        for (auto& [prop, values] : per_prop) {
            auto& out = schema.samples[label][prop];
            for (const auto& v : values) {
                if (out.size() == max_samples) break;
                out.push_back(v);
            }
        }
    return schema;
}

// Plain-text rendering used verbatim inside the NLQ prompt.
inline std::string render_schema(const SchemaDescriptor& schema) {
    std::ostringstream out;
    out << "Node labels:\n";
    for (const auto& [label, props] : schema.node_properties) {
        out << "  (:" << label << ")";
        if (!props.empty()) {
            out << " {";
            bool first = true;
            for (const auto& [name, type] : props) {
                if (!first) out << ", ";
                first = false;
                out << name << ": " << type;
            }
            out << "}";
        }
        out << "\n";
    }
    out << "Edge types:\n";
    for (const auto& [type, pairs] : schema.edge_endpoints) {
        for (const auto& [src, dst] : pairs)
            out << "  (:" << src << ")-[:" << type << "]->(:" << dst << ")\n";
    }
    out << "Sample values:\n";
    for (const auto& [label, per_prop] : schema.samples) {
        for (const auto& [prop, values] : per_prop) {
            out << "  " << label << "." << prop << ": ";
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out << ", ";
                // Oversized values (encoded vectors and the like) would swamp
                // the prompt; keep a recognizable prefix.
                if (values[i].size() > 60)
                    out << values[i].substr(0, 57) << "...";
                else
                    out << values[i];
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace assetgraph
