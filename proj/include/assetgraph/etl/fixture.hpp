#pragma once

// Deterministic source-bundle generator: one site, four locations, eleven
// equipment assets (nine chillers, two air handlers), ten sensors per
// asset, twelve failure modes, 6,256 events, and the dependency topology.
// Every byte is a pure function of the fixed seed, so rebuilds are
// reproducible end to end.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "assetgraph/etl/csv.hpp"
#include "assetgraph/etl/sources.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph::etl {

namespace fixture_detail {

struct SensorType {
    const char* type;
    const char* unit;
    double range_min;
    double range_max;
};

inline const std::vector<SensorType>& sensor_types() {
    static const std::vector<SensorType> kTypes = {
        {"temperature", "degC", -10.0, 120.0}, {"pressure", "kPa", 0.0, 2000.0},
        {"vibration", "mm/s", 0.0, 50.0},      {"current", "A", 0.0, 400.0},
        {"voltage", "V", 0.0, 480.0},          {"flow", "L/s", 0.0, 200.0},
        {"humidity", "%RH", 0.0, 100.0},       {"rpm", "rpm", 0.0, 3600.0},
        {"power", "kW", 0.0, 500.0},           {"acoustic", "dB", 30.0, 120.0}};
    return kTypes;
}

struct FailureModeSeed {
    const char* name;
    const char* description;
    std::vector<const char*> sensors;
};

inline const std::vector<FailureModeSeed>& failure_modes() {
    static const std::vector<FailureModeSeed> kModes = {
        {"Compressor Overheating",
         "Discharge temperature climbs beyond rated limits, usually from poor heat rejection or "
         "excess load.",
         {"temperature", "current"}},
        {"Refrigerant Leak",
         "Loss of refrigerant charge lowers suction pressure and starves the evaporator.",
         {"pressure", "flow"}},
        {"Bearing Wear",
         "Progressive degradation of motor or shaft bearings raises vibration and noise.",
         {"vibration", "acoustic"}},
        {"Condenser Fouling",
         "Scale and debris on condenser tubes reduce heat transfer and raise head pressure.",
         {"temperature", "pressure"}},
        {"Evaporator Freeze",
         "Low chilled-water flow lets tube surfaces drop below freezing and ice over.",
         {"temperature", "flow"}},
        {"Fan Imbalance",
         "Uneven fan blade loading causes periodic vibration at rotational frequency.",
         {"vibration", "rpm"}},
        {"Motor Winding Failure",
         "Insulation breakdown in stator windings drives current spikes and local heating.",
         {"current", "temperature"}},
        {"Filter Clogging",
         "Blocked filters increase differential pressure and restrict flow.",
         {"pressure", "flow"}},
        {"Belt Slippage",
         "Worn or loose drive belts slip under load, dropping delivered speed.",
         {"rpm", "acoustic"}},
        {"Control Valve Stiction",
         "Static friction in the valve stem causes jerky movement and poor flow control.",
         {"flow", "pressure"}},
        {"Sensor Drift",
         "Calibration loss produces readings that wander from true process values.",
         {"humidity"}},
        {"Compressor Surge",
         "Flow reversal through the compressor under low load causes pressure oscillation "
         "and rumble.",
         {"pressure", "vibration", "acoustic"}}};
    return kModes;
}

struct Asset {
    std::string id;
    std::string name;
    std::string location;
    std::string asset_class;
};

inline std::vector<Asset> assets() {
    std::vector<Asset> out;
    for (int i = 1; i <= 9; ++i) {
        Asset a;
        a.id = "CWC040" + std::string(i + 4 < 10 ? "0" : "") + std::to_string(i + 4);
        a.name = "Chiller " + std::to_string(i);
        a.location = i <= 5 ? "LOC-MECH" : "LOC-UTIL";
        a.asset_class = "CH";
        out.push_back(a);
    }
    out.push_back({"CWC04014", "AHU 1", "LOC-HVAC", "AH"});
    out.push_back({"CWC04015", "AHU 2", "LOC-HVAC", "AH"});
    return out;
}

} // namespace fixture_detail

inline std::string fixture_hierarchy_csv() {
    std::ostringstream out;
    out << "kind,id,name,parent_id,isa95_level,iso14224_class\n";
    out << "site,SITE01,Main Campus,,,\n";
    out << "location,LOC-MECH,Mechanical,SITE01,,\n";
    out << "location,LOC-ELEC,Electrical,SITE01,,\n";
    out << "location,LOC-HVAC,HVAC,SITE01,,\n";
    out << "location,LOC-UTIL,Utility,SITE01,,\n";
    for (const auto& a : fixture_detail::assets())
        out << "equipment," << a.id << "," << a.name << "," << a.location << ",4,"
            << a.asset_class << "\n";
    return out.str();
}

inline std::string fixture_sensors_json() {
    std::ostringstream out;
    out << "[\n";
    bool first = true;
    for (const auto& a : fixture_detail::assets()) {
        const auto& types = fixture_detail::sensor_types();
        for (std::size_t s = 0; s < types.size(); ++s) {
            if (!first) out << ",\n";
            first = false;
            out << "  {\"sensor_id\": \"" << a.id << "-S" << (s + 1 < 10 ? "0" : "")
                << (s + 1) << "\", \"equipment_id\": \"" << a.id << "\", \"type\": \""
                << types[s].type << "\", \"unit\": \"" << types[s].unit
                << "\", \"range_min\": " << types[s].range_min
                << ", \"range_max\": " << types[s].range_max << "}";
        }
    }
    out << "\n]\n";
    return out.str();
}

inline std::string fixture_failure_modes_yaml() {
    std::ostringstream out;
    for (const auto& fm : fixture_detail::failure_modes()) {
        out << "- name: " << fm.name << "\n";
        out << "  description: " << fm.description << "\n";
        out << "  sensors:\n";
        for (const char* s : fm.sensors) out << "    - " << s << "\n";
    }
    return out.str();
}

// 568 events per asset spread over 2018-2020, plus eight extra on CWC04009;
// kinds and payloads drawn from one seeded generator in a fixed order
inline std::string fixture_events_csv() {
    std::mt19937_64 rng(0x5eedf00d);
    const std::vector<std::string> actions = {
        "replaced compressor bearings", "cleaned condenser tubes",
        "recalibrated temperature sensor", "topped up refrigerant charge",
        "inspected drive belt", "serviced control valve"};
    const auto& types = fixture_detail::sensor_types();
    const auto& modes = fixture_detail::failure_modes();

    std::ostringstream out;
    out << "timestamp,equipment_id,kind,payload\n";
    const std::int64_t base = Timestamp::from_civil(2018, 1, 1).epoch_seconds;
    std::size_t wo_seq = 1000;
    auto emit = [&](const std::string& equipment_id, std::int64_t at) {
        const int kind_roll = std::uniform_int_distribution<int>(0, 99)(rng);
        std::string kind;
        std::string payload;
        if (kind_roll < 30) {
            kind = "work_order";
            payload = "WO-" + std::to_string(wo_seq++) + " " +
                      actions[std::uniform_int_distribution<std::size_t>(
                          0, actions.size() - 1)(rng)];
        } else if (kind_roll < 60) {
            kind = "alert";
            payload = std::string("alert: ") +
                      types[std::uniform_int_distribution<std::size_t>(
                                0, types.size() - 1)(rng)]
                          .type +
                      " threshold exceeded";
        } else if (kind_roll < 85) {
            kind = "anomaly";
            payload = "anomaly: score 0." +
                      std::to_string(std::uniform_int_distribution<int>(50, 99)(rng)) +
                      " on " +
                      types[std::uniform_int_distribution<std::size_t>(
                                0, types.size() - 1)(rng)]
                          .type;
        } else {
            kind = "failure";
            payload = std::string("failure: ") +
                      modes[std::uniform_int_distribution<std::size_t>(
                                0, modes.size() - 1)(rng)]
                          .name;
        }
        out << Timestamp{at}.to_iso8601() << "," << equipment_id << "," << kind << ","
            << csv_escape(payload) << "\n";
    };

    for (const auto& a : fixture_detail::assets()) {
        for (int k = 0; k < 568; ++k) {
            const std::int64_t at = base + static_cast<std::int64_t>(k) * 166000 +
                                    std::uniform_int_distribution<std::int64_t>(0, 30000)(rng);
            emit(a.id, at);
        }
        if (a.id == "CWC04009") {
            const std::int64_t july = Timestamp::from_civil(2019, 7, 15, 6).epoch_seconds;
            for (int k = 0; k < 8; ++k) emit(a.id, july + k * 3600);
        }
    }
    return out.str();
}

inline std::string fixture_topology_yaml() {
    std::ostringstream out;
    out << "- {from: AHU 1, rel: DEPENDS_ON, to: Chiller 6}\n";
    out << "- {from: AHU 2, rel: DEPENDS_ON, to: AHU 1}\n";
    out << "- {from: AHU 2, rel: DEPENDS_ON, to: Chiller 7}\n";
    const int loops[3][3] = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    for (const auto& loop : loops) {
        out << "- {from: Chiller " << loop[0] << ", rel: SHARES_SYSTEM_WITH, to: Chiller "
            << loop[1] << "}\n";
        out << "- {from: Chiller " << loop[1] << ", rel: SHARES_SYSTEM_WITH, to: Chiller "
            << loop[2] << "}\n";
        out << "- {from: Chiller " << loop[0] << ", rel: SHARES_SYSTEM_WITH, to: Chiller "
            << loop[2] << "}\n";
    }
    return out.str();
}

inline BundleText make_fixture_bundle() {
    BundleText text;
    text.hierarchy = fixture_hierarchy_csv();
    text.sensors = fixture_sensors_json();
    text.failure_modes = fixture_failure_modes_yaml();
    text.events = fixture_events_csv();
    text.topology = fixture_topology_yaml();
    return text;
}

} // namespace assetgraph::etl
