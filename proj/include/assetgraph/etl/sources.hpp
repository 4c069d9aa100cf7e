#pragma once

// The four benchmark-style data sources plus the dependency topology, parsed
// into typed records. Structural file damage is fatal; a bad individual
// record becomes a Rejection and never stops the run.
//
// Formats: hierarchy and events are RFC-4180 CSV with a header row, sensors
// a JSON array of objects, failure modes and topology YAML lists.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "assetgraph/error.hpp"
#include "assetgraph/etl/csv.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph::etl {

struct Rejection {
    std::string source;    // which input the record came from
    std::size_t line = 0;  // CSV line or 1-based entry index
    std::string reason;
};

struct HierarchyRow {
    enum class Kind { Site, Location, Equipment };
    Kind kind = Kind::Site;
    std::string id;
    std::string name;
    std::string parent_id;
    std::int64_t isa95_level = 0;
    std::string iso14224_class;
    std::size_t line = 0;
};

struct SensorRecord {
    std::string sensor_id;
    std::string equipment_id;
    std::string type;
    std::string unit;
    double range_min = 0.0;
    double range_max = 0.0;
};

struct FailureModeRecord {
    std::string name;
    std::string description;
    std::vector<std::string> sensor_types;
};

struct EventRow {
    Timestamp timestamp;
    std::string equipment_id;
    std::string kind;
    std::string payload;
    std::size_t line = 0;
};

struct TopologyPair {
    std::string from;    // equipment id or display name
    std::string rel;     // DEPENDS_ON or SHARES_SYSTEM_WITH
    std::string to;
};

struct BundleText {
    std::string hierarchy;
    std::string sensors;
    std::string failure_modes;
    std::string events;
    std::string topology;
};

struct BundlePaths {
    std::string hierarchy;
    std::string sensors;
    std::string failure_modes;
    std::string events;
    std::string topology;
};

struct SourceBundle {
    std::vector<HierarchyRow> hierarchy;
    std::vector<SensorRecord> sensors;
    std::vector<FailureModeRecord> failure_modes;
    std::vector<EventRow> events;
    std::vector<TopologyPair> topology;
    std::vector<Rejection> rejections;    // collected during parsing
};

namespace etl_detail {

inline void expect_header(const CsvTable& table, const std::vector<std::string>& wanted,
                          const std::string& origin) {
    if (table.header != wanted) {
        std::string have;
        for (std::size_t i = 0; i < table.header.size(); ++i)
            have += (i ? "," : "") + table.header[i];
        throw IoError(origin + ":1: expected header '" +
                      [&] {
                          std::string w;
                          for (std::size_t i = 0; i < wanted.size(); ++i)
                              w += (i ? "," : "") + wanted[i];
                          return w;
                      }() +
                      "', found '" + have + "'");
    }
}

inline bool parse_int(const std::string& text, std::int64_t& out) {
    if (text.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stoll(text, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == text.size();
}

inline bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(text, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == text.size();
}

} // namespace etl_detail

inline void parse_hierarchy(const std::string& text, SourceBundle& bundle,
                            const std::string& origin = "hierarchy") {
    CsvTable table = parse_csv(text, origin);
    if (table.header.empty() && table.rows.empty()) return;
    etl_detail::expect_header(
        table, {"kind", "id", "name", "parent_id", "isa95_level", "iso14224_class"}, origin);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.row_lines[r];
        auto reject = [&](const std::string& why) {
            bundle.rejections.push_back({origin, line, why});
        };
        if (row.size() != 6) {
            reject("expected 6 columns, found " + std::to_string(row.size()));
            continue;
        }
        HierarchyRow out;
        if (row[0] == "site")
            out.kind = HierarchyRow::Kind::Site;
        else if (row[0] == "location")
            out.kind = HierarchyRow::Kind::Location;
        else if (row[0] == "equipment")
            out.kind = HierarchyRow::Kind::Equipment;
        else {
            reject("unknown row kind '" + row[0] + "'");
            continue;
        }
        out.id = row[1];
        out.name = row[2];
        out.parent_id = row[3];
        if (out.id.empty()) {
            reject("empty id");
            continue;
        }
        if (out.kind != HierarchyRow::Kind::Site && out.parent_id.empty()) {
            reject("missing parent_id");
            continue;
        }
        if (out.kind == HierarchyRow::Kind::Equipment) {
            if (!etl_detail::parse_int(row[4], out.isa95_level)) {
                reject("isa95_level is not an integer: '" + row[4] + "'");
                continue;
            }
            out.iso14224_class = row[5];
        }
        out.line = line;
        bundle.hierarchy.push_back(std::move(out));
    }
}

inline void parse_sensors(const std::string& text, SourceBundle& bundle,
                          const std::string& origin = "sensors") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(origin + ": " + e.what());
    }
    if (!doc.is_array()) throw IoError(origin + ": top level must be a JSON array");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        auto reject = [&](const std::string& why) {
            bundle.rejections.push_back({origin, i + 1, why});
        };
        if (!item.is_object()) {
            reject("entry is not an object");
            continue;
        }
        SensorRecord out;
        bool ok = true;
        auto text_field = [&](const char* key, std::string& into) {
            if (!item.contains(key) || !item[key].is_string() ||
                item[key].get<std::string>().empty()) {
                reject(std::string("missing or non-text '") + key + "'");
                ok = false;
                return;
            }
            into = item[key].get<std::string>();
        };
        text_field("sensor_id", out.sensor_id);
        if (ok) text_field("equipment_id", out.equipment_id);
        if (ok) text_field("type", out.type);
        if (ok) text_field("unit", out.unit);
        if (ok) {
            if (!item.contains("range_min") || !item["range_min"].is_number()) {
                reject("missing or non-numeric 'range_min'");
                ok = false;
            } else {
                out.range_min = item["range_min"].get<double>();
            }
        }
        if (ok) {
            if (!item.contains("range_max") || !item["range_max"].is_number()) {
                reject("missing or non-numeric 'range_max'");
                ok = false;
            } else {
                out.range_max = item["range_max"].get<double>();
            }
        }
        if (ok) bundle.sensors.push_back(std::move(out));
    }
}

inline void parse_failure_modes(const std::string& text, SourceBundle& bundle,
                                const std::string& origin = "failure_modes") {
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw IoError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (doc.IsNull()) return;
    if (!doc.IsSequence()) throw IoError(origin + ": top level must be a YAML list");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        auto reject = [&](const std::string& why) {
            bundle.rejections.push_back({origin, i + 1, why});
        };
        if (!item.IsMap()) {
            reject("entry is not a mapping");
            continue;
        }
        FailureModeRecord out;
        if (!item["name"] || !item["name"].IsScalar()) {
            reject("missing 'name'");
            continue;
        }
        out.name = item["name"].as<std::string>();
        if (item["description"] && item["description"].IsScalar())
            out.description = item["description"].as<std::string>();
        if (!item["sensors"] || !item["sensors"].IsSequence()) {
            reject("missing 'sensors' list");
            continue;
        }
        bool ok = true;
        for (const auto& s : item["sensors"]) {
            if (!s.IsScalar()) {
                reject("non-scalar sensor type");
                ok = false;
                break;
            }
            out.sensor_types.push_back(s.as<std::string>());
        }
        if (ok) bundle.failure_modes.push_back(std::move(out));
    }
}

inline void parse_events(const std::string& text, SourceBundle& bundle,
                         const std::string& origin = "events") {
    CsvTable table = parse_csv(text, origin);
    if (table.header.empty() && table.rows.empty()) return;
    etl_detail::expect_header(table, {"timestamp", "equipment_id", "kind", "payload"}, origin);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.row_lines[r];
        auto reject = [&](const std::string& why) {
            bundle.rejections.push_back({origin, line, why});
        };
        if (row.size() != 4) {
            reject("expected 4 columns, found " + std::to_string(row.size()));
            continue;
        }
        auto ts = Timestamp::parse(row[0]);
        if (!ts) {
            reject("unparseable timestamp '" + row[0] + "'");
            continue;
        }
        if (row[1].empty()) {
            reject("empty equipment_id");
            continue;
        }
        if (row[2].empty()) {
            reject("empty kind");
            continue;
        }
        bundle.events.push_back(EventRow{*ts, row[1], row[2], row[3], line});
    }
}

inline void parse_topology(const std::string& text, SourceBundle& bundle,
                           const std::string& origin = "topology") {
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw IoError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (doc.IsNull()) return;
    if (!doc.IsSequence()) throw IoError(origin + ": top level must be a YAML list");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        auto reject = [&](const std::string& why) {
            bundle.rejections.push_back({origin, i + 1, why});
        };
        if (!item.IsMap() || !item["from"] || !item["rel"] || !item["to"]) {
            reject("entry must be a {from, rel, to} mapping");
            continue;
        }
        TopologyPair out{item["from"].as<std::string>(), item["rel"].as<std::string>(),
                         item["to"].as<std::string>()};
        if (out.rel != "DEPENDS_ON" && out.rel != "SHARES_SYSTEM_WITH") {
            reject("unknown relationship '" + out.rel + "'");
            continue;
        }
        bundle.topology.push_back(std::move(out));
    }
}

inline SourceBundle parse_bundle(const BundleText& text) {
    SourceBundle bundle;
    parse_hierarchy(text.hierarchy, bundle);
    parse_sensors(text.sensors, bundle);
    parse_failure_modes(text.failure_modes, bundle);
    parse_events(text.events, bundle);
    parse_topology(text.topology, bundle);
    return bundle;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline SourceBundle load_bundle(const BundlePaths& paths) {
    SourceBundle bundle;
    parse_hierarchy(read_file(paths.hierarchy), bundle, paths.hierarchy);
    parse_sensors(read_file(paths.sensors), bundle, paths.sensors);
    parse_failure_modes(read_file(paths.failure_modes), bundle, paths.failure_modes);
    parse_events(read_file(paths.events), bundle, paths.events);
    parse_topology(read_file(paths.topology), bundle, paths.topology);
    return bundle;
}

} // namespace assetgraph::etl
