#pragma once

// Assembles the property graph from a parsed source bundle: equipment
// hierarchy, sensors, embedded failure modes with a vector index, events,
// and the dependency topology. Referential problems turn into rejection
// entries; the surviving records build the graph in one deterministic pass,
// so identical bundles produce identical graphs.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/etl/sources.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/vector/embedding.hpp"
#include "assetgraph/vector/hnsw.hpp"

namespace assetgraph::etl {

struct EtlReport {
    std::map<std::string, std::size_t> node_counts;
    std::map<std::string, std::size_t> edge_counts;
    std::vector<Rejection> rejected;
    double elapsed_seconds = 0.0;
};

struct BuildResult {
    PropertyGraph graph;
    vec::HnswIndex failure_mode_index;    // keyed by FailureMode node id
    EtlReport report;
};

namespace etl_detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace etl_detail

// Adds one edge per distinct surviving config pair; `from`/`to` match either
// an equipment id or its display name. Returns the number of edges created;
// re-applying the same config is a no-op.
inline std::size_t apply_topology(PropertyGraph& graph, const std::vector<TopologyPair>& pairs,
                                  std::vector<Rejection>* rejected = nullptr) {
    std::map<std::string, NodeId> by_key;
    for (NodeId id : graph.nodes_by_label("Equipment")) {
        const Node& node = graph.node(id);
        if (const Scalar* eq = node.property("equipment_id"); eq && eq->is_text())
            by_key[eq->text()] = id;
        if (const Scalar* nm = node.property("name"); nm && nm->is_text())
            by_key[nm->text()] = id;
    }
    std::set<std::tuple<NodeId, std::string, NodeId>> present;
    for (const auto& [eid, edge] : graph.edges())
        if (edge.type == "DEPENDS_ON" || edge.type == "SHARES_SYSTEM_WITH")
            present.insert({edge.src, edge.type, edge.dst});

    std::size_t added = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const TopologyPair& pair = pairs[i];
        auto reject = [&](const std::string& why) {
            if (rejected) rejected->push_back({"topology", i + 1, why});
        };
        auto from = by_key.find(pair.from);
        if (from == by_key.end()) {
            reject("unknown equipment '" + pair.from + "'");
            continue;
        }
        auto to = by_key.find(pair.to);
        if (to == by_key.end()) {
            reject("unknown equipment '" + pair.to + "'");
            continue;
        }
        auto key = std::tuple<NodeId, std::string, NodeId>{from->second, pair.rel, to->second};
        if (present.count(key)) continue;
        graph.create_edge(pair.rel, from->second, to->second);
        present.insert(key);
        ++added;
    }
    return added;
}

inline BuildResult build_graph(const SourceBundle& bundle, vec::EmbeddingProvider& embedder) {
    const auto started = std::chrono::steady_clock::now();
    BuildResult result;
    PropertyGraph& g = result.graph;
    EtlReport& report = result.report;
    report.rejected = bundle.rejections;
    auto reject = [&](const std::string& source, std::size_t line, const std::string& why) {
        report.rejected.push_back({source, line, why});
    };

    // hierarchy: sites first, then locations under sites, then equipment
    // under locations, so parents always resolve in one pass per level
    std::map<std::string, NodeId> sites, locations, equipment;
    std::map<std::string, NodeId> equipment_by_name;
    for (const HierarchyRow& row : bundle.hierarchy) {
        if (row.kind != HierarchyRow::Kind::Site) continue;
        if (sites.count(row.id)) {
            reject("hierarchy", row.line, "duplicate site id '" + row.id + "'");
            continue;
        }
        sites[row.id] = g.create_node(
            {"Site"}, {{"site_id", Scalar(row.id)}, {"name", Scalar(row.name)}});
    }
    for (const HierarchyRow& row : bundle.hierarchy) {
        if (row.kind != HierarchyRow::Kind::Location) continue;
        auto parent = sites.find(row.parent_id);
        if (parent == sites.end()) {
            reject("hierarchy", row.line, "location '" + row.id + "' references unknown site '" +
                                              row.parent_id + "'");
            continue;
        }
        if (locations.count(row.id)) {
            reject("hierarchy", row.line, "duplicate location id '" + row.id + "'");
            continue;
        }
        NodeId id = g.create_node(
            {"Location"}, {{"location_id", Scalar(row.id)}, {"name", Scalar(row.name)}});
        locations[row.id] = id;
        g.create_edge("CONTAINS_LOCATION", parent->second, id);
    }
    for (const HierarchyRow& row : bundle.hierarchy) {
        if (row.kind != HierarchyRow::Kind::Equipment) continue;
        auto parent = locations.find(row.parent_id);
        if (parent == locations.end()) {
            reject("hierarchy", row.line,
                   "equipment '" + row.id + "' references unknown location '" + row.parent_id +
                       "'");
            continue;
        }
        if (equipment.count(row.id)) {
            reject("hierarchy", row.line, "duplicate equipment id '" + row.id + "'");
            continue;
        }
        NodeId id = g.create_node({"Equipment"}, {{"equipment_id", Scalar(row.id)},
                                                  {"name", Scalar(row.name)},
                                                  {"isa95_level", Scalar(row.isa95_level)},
                                                  {"iso14224_class", Scalar(row.iso14224_class)}});
        equipment[row.id] = id;
        equipment_by_name[row.name] = id;
        g.create_edge("CONTAINS_EQUIPMENT", parent->second, id);
    }

    // sensors attach to known equipment; the type property drives MONITORS
    std::map<std::string, std::vector<NodeId>> sensors_by_type;
    std::set<std::string> seen_sensor_ids;
    for (std::size_t i = 0; i < bundle.sensors.size(); ++i) {
        const SensorRecord& rec = bundle.sensors[i];
        auto parent = equipment.find(rec.equipment_id);
        if (parent == equipment.end()) {
            reject("sensors", i + 1,
                   "sensor '" + rec.sensor_id + "' references unknown equipment '" +
                       rec.equipment_id + "'");
            continue;
        }
        if (!seen_sensor_ids.insert(rec.sensor_id).second) {
            reject("sensors", i + 1, "duplicate sensor id '" + rec.sensor_id + "'");
            continue;
        }
        NodeId id = g.create_node({"Sensor"}, {{"sensor_id", Scalar(rec.sensor_id)},
                                               {"equipment_id", Scalar(rec.equipment_id)},
                                               {"type", Scalar(rec.type)},
                                               {"unit", Scalar(rec.unit)},
                                               {"range_min", Scalar(rec.range_min)},
                                               {"range_max", Scalar(rec.range_max)}});
        g.create_edge("HAS_SENSOR", parent->second, id);
        sensors_by_type[etl_detail::lower(rec.type)].push_back(id);
    }

    // failure modes: embed in one batch, index by node id, then wire
    // MONITORS from every sensor whose type a mode declares (case blind)
    std::vector<std::string> fm_texts;
    for (const FailureModeRecord& rec : bundle.failure_modes)
        fm_texts.push_back(rec.name + ". " + rec.description);
    std::vector<vec::EmbeddingVector> fm_vectors;
    if (!fm_texts.empty()) fm_vectors = embedder.embed_batch(fm_texts);

    vec::HnswIndex::Params index_params;
    if (!fm_vectors.empty()) index_params.dim = fm_vectors.front().dimension();
    result.failure_mode_index = vec::HnswIndex(index_params);
    std::set<std::string> seen_fm_names;
    for (std::size_t i = 0; i < bundle.failure_modes.size(); ++i) {
        const FailureModeRecord& rec = bundle.failure_modes[i];
        if (!seen_fm_names.insert(rec.name).second) {
            reject("failure_modes", i + 1, "duplicate failure mode '" + rec.name + "'");
            continue;
        }
        NodeId id = g.create_node(
            {"FailureMode"},
            {{"name", Scalar(rec.name)},
             {"description", Scalar(rec.description)},
             {"embedding", Scalar(vec::embedding_to_text(fm_vectors[i]))}});
        result.failure_mode_index.insert(id, fm_vectors[i]);
        std::set<NodeId> linked;
        for (const std::string& type : rec.sensor_types) {
            auto hit = sensors_by_type.find(etl_detail::lower(type));
            if (hit == sensors_by_type.end()) continue;
            for (NodeId sensor : hit->second)
                if (linked.insert(sensor).second) g.create_edge("MONITORS", sensor, id);
        }
    }

    // events reference equipment by id; the year property is denormalized
    // from the timestamp for cheap temporal filters
    for (std::size_t i = 0; i < bundle.events.size(); ++i) {
        const EventRow& rec = bundle.events[i];
        auto parent = equipment.find(rec.equipment_id);
        if (parent == equipment.end()) {
            reject("events", rec.line,
                   "event references unknown equipment '" + rec.equipment_id + "'");
            continue;
        }
        int year = 0;
        {
            unsigned mo, d;
            std::int64_t days = rec.timestamp.epoch_seconds / 86400;
            if (rec.timestamp.epoch_seconds % 86400 < 0) days -= 1;
            Timestamp::civil_from_days(days, year, mo, d);
        }
        NodeId id = g.create_node({"Event"}, {{"equipment_id", Scalar(rec.equipment_id)},
                                              {"kind", Scalar(rec.kind)},
                                              {"ts", Scalar(rec.timestamp)},
                                              {"year", Scalar(static_cast<std::int64_t>(year))},
                                              {"payload", Scalar(rec.payload)}});
        g.create_edge("FOR_EQUIPMENT", id, parent->second);
    }

    apply_topology(g, bundle.topology, &report.rejected);

    report.node_counts = g.node_census();
    report.edge_counts = g.edge_census();
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace assetgraph::etl
