#pragma once

// Mean time between failures for one equipment node: the average calendar
// gap, in hours, between consecutive qualifying events. Fewer than two
// events inside the window leaves the mean absent rather than zero.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph::analytics {

struct MtbfOptions {
    std::string event_edge_type = "FOR_EQUIPMENT";    // event -> equipment
    std::string kind_property = "kind";
    std::string kind_value = "failure";
    std::string time_property = "ts";
    std::optional<Timestamp> window_start;    // inclusive
    std::optional<Timestamp> window_end;      // inclusive
};

struct MtbfStat {
    NodeId equipment = 0;
    std::size_t event_count = 0;
    std::optional<double> mean_gap_hours;
    std::optional<Timestamp> window_start;
    std::optional<Timestamp> window_end;
};

inline MtbfStat mtbf(const PropertyGraph& graph, NodeId equipment,
                     const MtbfOptions& opts = {}) {
    if (!graph.has_node(equipment))
        throw ValidationError("mtbf equipment node does not exist");

    std::vector<std::int64_t> times;
    for (const NeighborHit& hit : graph.neighbors(equipment, opts.event_edge_type, Direction::In)) {
        const Node& event = graph.node(hit.node);
        const Scalar* kind = event.property(opts.kind_property);
        if (!kind || !kind->is_text() || kind->text() != opts.kind_value) continue;
        const Scalar* ts = event.property(opts.time_property);
        if (!ts || !ts->is_time()) continue;
        const std::int64_t sec = ts->time().epoch_seconds;
        if (opts.window_start && sec < opts.window_start->epoch_seconds) continue;
        if (opts.window_end && sec > opts.window_end->epoch_seconds) continue;
        times.push_back(sec);
    }
    std::sort(times.begin(), times.end());

    MtbfStat stat;
    stat.equipment = equipment;
    stat.event_count = times.size();
    stat.window_start = opts.window_start;
    stat.window_end = opts.window_end;
    if (times.size() >= 2) {
        double total = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i)
            total += static_cast<double>(times[i] - times[i - 1]) / 3600.0;
        stat.mean_gap_hours = total / static_cast<double>(times.size() - 1);
    }
    return stat;
}

} // namespace assetgraph::analytics
