#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "assetgraph/graph.hpp"

namespace assetgraph {

// Snapshot file: UTF-8, one JSON record per line, LF endings, keys sorted.
// Node records precede edge records; auxiliary records (enrichment cache)
// come last:
//   {"n": {"id": "...", "labels": [...], "props": {...}, "prov": "data"|"llm"}}
//   {"e": {"id": "...", "type": "...", "src": "...", "dst": "...", "props": {...}}}
//   {"g": {...}}
// Timestamp properties are encoded as {"ts": "<ISO-8601>"} so the scalar
// kind survives the round trip.

class SnapshotParseError : public Error {
public:
    SnapshotParseError(std::size_t line, const std::string& msg)
        : Error("snapshot parse error at line " + std::to_string(line) + ": " + msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace snapshot_detail {

inline nlohmann::json scalar_to_json(const Scalar& s) {
    switch (s.kind()) {
        case Scalar::Kind::Text: return s.text();
        case Scalar::Kind::Integer: return s.integer();
        case Scalar::Kind::Float: return s.floating();
        case Scalar::Kind::Boolean: return s.boolean();
        case Scalar::Kind::Time: return nlohmann::json{{"ts", s.time().to_iso8601()}};
    }
    return nullptr;
}

inline Scalar scalar_from_json(const nlohmann::json& j, std::size_t line) {
    if (j.is_string()) return Scalar(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
    if (j.is_number_float()) return Scalar(j.get<double>());
    if (j.is_boolean()) return Scalar(j.get<bool>());
    if (j.is_object() && j.size() == 1 && j.contains("ts") && j["ts"].is_string()) {
        auto ts = Timestamp::parse(j["ts"].get<std::string>());
        if (!ts) throw SnapshotParseError(line, "bad timestamp '" + j["ts"].get<std::string>() + "'");
        return Scalar(*ts);
    }
    throw SnapshotParseError(line, "unsupported property value " + j.dump());
}

inline nlohmann::json props_to_json(const PropertyMap& props) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : props) out[k] = scalar_to_json(v);
    return out;
}

inline PropertyMap props_from_json(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw SnapshotParseError(line, "props must be an object");
    PropertyMap out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out.emplace(it.key(), scalar_from_json(it.value(), line));
    return out;
}

inline std::uint64_t id_from_json(const nlohmann::json& j, std::size_t line, const char* what) {
    if (!j.is_string()) throw SnapshotParseError(line, std::string(what) + " id must be a string");
    const std::string& s = j.get_ref<const std::string&>();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw SnapshotParseError(line, std::string("bad ") + what + " id '" + s + "'");
    return v;
}

} // namespace snapshot_detail

inline std::string snapshot_to_string(const PropertyGraph& graph,
                                      const std::vector<nlohmann::json>& aux_records = {}) {
    using nlohmann::json;
    std::string out;
    for (const auto& [id, node] : graph.nodes()) {
        json rec;
        rec["id"] = PropertyGraph::external_id(id);
        rec["labels"] = json::array();
        for (const auto& l : node.labels) rec["labels"].push_back(l);
        rec["props"] = snapshot_detail::props_to_json(node.properties);
        rec["prov"] = node.provenance == Provenance::LlmDerived ? "llm" : "data";
        out += json{{"n", rec}}.dump();
        out += '\n';
    }
    for (const auto& [id, edge] : graph.edges()) {
        json rec;
        rec["id"] = PropertyGraph::external_id(id);
        rec["type"] = edge.type;
        rec["src"] = PropertyGraph::external_id(edge.src);
        rec["dst"] = PropertyGraph::external_id(edge.dst);
        rec["props"] = snapshot_detail::props_to_json(edge.properties);
        out += json{{"e", rec}}.dump();
        out += '\n';
    }
    for (const auto& rec : aux_records) {
        out += nlohmann::json{{"g", rec}}.dump();
        out += '\n';
    }
    return out;
}

inline void snapshot_save(const PropertyGraph& graph, const std::string& path,
                          const std::vector<nlohmann::json>& aux_records = {}) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << snapshot_to_string(graph, aux_records);
    if (!f) throw IoError("write failed on '" + path + "'");
}

struct LoadedSnapshot {
    PropertyGraph graph;
    std::vector<nlohmann::json> aux_records;
};

namespace snapshot_detail {

inline void parse_node_record(const nlohmann::json& rec, std::size_t lineno, PropertyGraph& graph) {
    Node node;
    node.id = id_from_json(rec.at("id"), lineno, "node");
    if (!rec.contains("labels") || !rec["labels"].is_array())
        throw SnapshotParseError(lineno, "node record missing labels array");
    for (const auto& l : rec["labels"]) node.labels.insert(l.get<std::string>());
    node.properties = props_from_json(rec.at("props"), lineno);
    const std::string prov = rec.at("prov").get<std::string>();
    if (prov == "llm")
        node.provenance = Provenance::LlmDerived;
    else if (prov == "data")
        node.provenance = Provenance::DataDerived;
    else
        throw SnapshotParseError(lineno, "unknown provenance '" + prov + "'");
    try {
        graph.restore_node(std::move(node));
    } catch (const ValidationError& e) {
        throw SnapshotParseError(lineno, e.what());
    }
}

inline void parse_edge_record(const nlohmann::json& rec, std::size_t lineno, PropertyGraph& graph) {
    Edge edge;
    edge.id = id_from_json(rec.at("id"), lineno, "edge");
    edge.type = rec.at("type").get<std::string>();
    edge.src = id_from_json(rec.at("src"), lineno, "src");
    edge.dst = id_from_json(rec.at("dst"), lineno, "dst");
    edge.properties = props_from_json(rec.at("props"), lineno);
    try {
        graph.restore_edge(std::move(edge));
    } catch (const ValidationError& e) {
        throw SnapshotParseError(lineno, e.what());
    }
}

} // namespace snapshot_detail

inline LoadedSnapshot snapshot_parse(std::istream& in) {
    LoadedSnapshot out;
    std::string line;
    std::size_t lineno = 0;
    bool seen_edge = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw SnapshotParseError(lineno, "malformed JSON record");
        if (!j.is_object() || j.size() != 1)
            throw SnapshotParseError(lineno, "record must have exactly one kind key");
        try {
            if (j.contains("n")) {
                if (seen_edge) throw SnapshotParseError(lineno, "node record after edge records");
                snapshot_detail::parse_node_record(j["n"], lineno, out.graph);
            } else if (j.contains("e")) {
                seen_edge = true;
                snapshot_detail::parse_edge_record(j["e"], lineno, out.graph);
            } else if (j.contains("g")) {
                out.aux_records.push_back(j["g"]);
            } else {
                throw SnapshotParseError(lineno, "unknown record kind");
            }
        } catch (const nlohmann::json::exception& e) {
            throw SnapshotParseError(lineno, e.what());
        }
    }
    return out;
}

inline LoadedSnapshot snapshot_load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return snapshot_parse(f);
}

} // namespace assetgraph
