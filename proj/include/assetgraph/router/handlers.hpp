#pragma once

// The deterministic handler catalog. Each handler pairs trigger patterns
// with a bound action over the graph or an analytics primitive; the catalog
// is ordered most-specific first and the router takes the first match.
// Handlers never invent values: everything in a payload is read from the
// graph or computed by an analytics call on it.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "assetgraph/analytics/cascade.hpp"
#include "assetgraph/analytics/mtbf.hpp"
#include "assetgraph/analytics/nsga2.hpp"
#include "assetgraph/analytics/pagerank.hpp"
#include "assetgraph/cypher/executor.hpp"
#include "assetgraph/cypher/parser.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/router/answer.hpp"
#include "assetgraph/router/resolve.hpp"
#include "assetgraph/vector/embedding.hpp"
#include "assetgraph/vector/hnsw.hpp"

namespace assetgraph::router {

// read-only bundle handed to every handler; built once per graph
struct RouterContext {
    const PropertyGraph& graph;
    EntityResolver resolver;
    vec::HnswIndex fm_index;

    explicit RouterContext(const PropertyGraph& g) : graph(g), resolver(g) {
        std::vector<std::pair<NodeId, vec::EmbeddingVector>> entries;
        for (NodeId id : g.nodes_by_label("FailureMode")) {
            const Scalar* emb = g.node(id).property("embedding");
            if (!emb || !emb->is_text()) continue;
            entries.push_back({id, vec::embedding_from_text(emb->text())});
        }
        vec::HnswIndex::Params params;
        if (!entries.empty()) params.dim = entries.front().second.dimension();
        fm_index = vec::HnswIndex(params);
        for (const auto& [id, v] : entries) fm_index.insert(id, v);
    }
};

struct HandlerSpec {
    std::string name;
    std::vector<std::string> triggers;
    // nullopt = trigger fired but a required parameter could not be extracted
    std::function<std::optional<Answer>(const Question&, const RouterContext&)> run;

    bool matches(const std::string& text) const {
        for (const auto& pattern : triggers)
            if (std::regex_search(text, std::regex(pattern, std::regex::icase))) return true;
        return false;
    }
};

namespace router_detail {

inline std::string text_of(const PropertyGraph& g, NodeId id, const std::string& key) {
    const Scalar* v = g.node(id).property(key);
    return v && v->is_text() ? v->text() : std::string();
}

inline std::string label_of(const PropertyGraph& g, NodeId id) {
    std::string s = text_of(g, id, "equipment_id");
    if (s.empty()) s = text_of(g, id, "name");
    return s.empty() ? std::to_string(id) : s;
}

inline std::string display_of(const PropertyGraph& g, NodeId id) {
    std::string s = text_of(g, id, "name");
    return s.empty() ? label_of(g, id) : s;
}

inline std::string fmt(double v, int digits = 1) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

struct EventRec {
    Timestamp ts{0};
    std::string kind;
    std::string payload;
    NodeId id = 0;
};

inline std::vector<EventRec> events_of(const PropertyGraph& g, NodeId equipment,
                                       const std::string& kind_filter = "") {
    std::vector<EventRec> out;
    for (const auto& hit : g.neighbors(equipment, "FOR_EQUIPMENT", Direction::In)) {
        const Node& ev = g.node(hit.node);
        const Scalar* ts = ev.property("ts");
        const Scalar* kind = ev.property("kind");
        if (!ts || !ts->is_time() || !kind || !kind->is_text()) continue;
        if (!kind_filter.empty() && kind->text() != kind_filter) continue;
        const Scalar* payload = ev.property("payload");
        out.push_back({ts->time(), kind->text(),
                       payload && payload->is_text() ? payload->text() : "", hit.node});
    }
    std::sort(out.begin(), out.end(), [](const EventRec& a, const EventRec& b) {
        if (a.ts.epoch_seconds != b.ts.epoch_seconds)
            return a.ts.epoch_seconds < b.ts.epoch_seconds;
        return a.id < b.id;
    });
    return out;
}

struct TableBuilder {
    cypher::ResultTable table;
    explicit TableBuilder(std::vector<std::string> columns) {
        table.columns = std::move(columns);
    }
    void row(std::vector<std::optional<Scalar>> cells) { table.rows.push_back(std::move(cells)); }
    nlohmann::json json() const { return result_table_json(table); }
};

inline Answer table_answer(std::string text, const TableBuilder& tb) {
    Answer a;
    a.text = std::move(text);
    a.payload = tb.json();
    return a;
}

// transitive closure in one direction of DEPENDS_ON, root included
inline std::set<NodeId> dependency_closure(const PropertyGraph& g, NodeId root, Direction dir) {
    std::set<NodeId> seen = {root};
    std::vector<NodeId> frontier = {root};
    while (!frontier.empty()) {
        std::vector<NodeId> next;
        for (NodeId at : frontier)
            for (const auto& hit : g.neighbors(at, "DEPENDS_ON", dir))
                if (seen.insert(hit.node).second) next.push_back(hit.node);
        frontier = std::move(next);
    }
    return seen;
}

// ---- individual handlers -------------------------------------------------

inline std::optional<Answer> run_failure_similarity(const Question& q,
                                                    const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    std::vector<NodeId> source_modes;
    auto eq = ctx.resolver.first(q.text);
    if (eq) {
        std::set<NodeId> seen;
        for (const auto& ev : events_of(g, *eq, "failure")) {
            auto mode = ctx.resolver.failure_mode(ev.payload);
            if (mode && seen.insert(*mode).second) source_modes.push_back(*mode);
        }
    } else if (auto mode = ctx.resolver.failure_mode(q.text)) {
        source_modes.push_back(*mode);
    } else {
        return std::nullopt;
    }

    Answer a;
    if (source_modes.empty()) {
        a.text = "No recorded failures for " + display_of(g, *eq) +
                 "; nothing to compare against.";
        a.payload = {{"source", nlohmann::json::array()},
                     {"matches", nlohmann::json::array()},
                     {"equipment", nlohmann::json::array()}};
        return a;
    }

    std::map<NodeId, double> best;
    for (NodeId mode : source_modes) {
        const Scalar* emb = g.node(mode).property("embedding");
        if (!emb || !emb->is_text()) continue;
        for (const auto& [key, dist] : ctx.fm_index.knn(vec::embedding_from_text(emb->text()), 6)) {
            const NodeId hit = static_cast<NodeId>(key);
            if (std::count(source_modes.begin(), source_modes.end(), hit)) continue;
            auto it = best.find(hit);
            if (it == best.end() || dist < it->second) best[hit] = dist;
        }
    }
    std::vector<std::pair<double, NodeId>> ranked;
    for (const auto& [id, d] : best) ranked.push_back({d, id});
    std::sort(ranked.begin(), ranked.end());

    std::set<std::string> similar_names;
    nlohmann::json matches = nlohmann::json::array();
    for (const auto& [d, id] : ranked) {
        const std::string name = text_of(g, id, "name");
        similar_names.insert(ascii_lower(name));
        matches.push_back({{"failure_mode", name}, {"distance", d}});
    }

    // other equipment whose failure events mention a similar mode
    std::set<std::string> hit_equipment;
    for (NodeId other : g.nodes_by_label("Equipment")) {
        if (eq && other == *eq) continue;
        for (const auto& ev : events_of(g, other, "failure")) {
            auto mode = ctx.resolver.failure_mode(ev.payload);
            if (mode && similar_names.count(ascii_lower(text_of(g, *mode, "name")))) {
                hit_equipment.insert(label_of(g, other));
                break;
            }
        }
    }

    nlohmann::json sources = nlohmann::json::array();
    for (NodeId id : source_modes) sources.push_back(text_of(g, id, "name"));
    a.payload = {{"source", sources},
                 {"matches", matches},
                 {"equipment", std::vector<std::string>(hit_equipment.begin(),
                                                        hit_equipment.end())}};
    std::ostringstream text;
    text << ranked.size() << " failure modes similar to "
         << (eq ? "those of " + display_of(g, *eq)
                : text_of(g, source_modes.front(), "name"))
         << "; seen on " << hit_equipment.size() << " other equipment";
    if (!hit_equipment.empty()) {
        text << ": ";
        bool first = true;
        for (const auto& e : hit_equipment) {
            if (!first) text << ", ";
            text << e;
            first = false;
        }
    }
    text << ".";
    a.text = text.str();
    return a;
}

inline std::optional<Answer> run_criticality(const Question&, const RouterContext& ctx) {
    analytics::PagerankOptions opts;
    opts.forward_types = {"DEPENDS_ON"};
    opts.undirected_types = {"SHARES_SYSTEM_WITH"};
    opts.restrict_to_labels = {"Equipment"};
    auto ranking = analytics::pagerank(ctx.graph, opts);

    Answer a;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [id, score] : ranking.entries)
        entries.push_back({{"equipment", label_of(ctx.graph, id)}, {"score", score}});
    a.payload = {{"entries", std::move(entries)}, {"iterations", ranking.iterations}};
    if (ranking.entries.empty()) {
        a.text = "No equipment to rank.";
    } else {
        a.text = "Criticality ranking of " + std::to_string(ranking.entries.size()) +
                 " equipment; most critical: " +
                 display_of(ctx.graph, ranking.entries.front().first) + " (score " +
                 fmt(ranking.entries.front().second, 4) + ").";
    }
    return a;
}

inline std::optional<Answer> run_maintenance_optimization(const Question&,
                                                          const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    constexpr std::int64_t kHorizonHours = 168;

    std::vector<analytics::WorkOrder> orders;
    for (NodeId id : g.nodes_by_label("Equipment")) {
        const std::size_t failures = events_of(g, id, "failure").size();
        if (failures == 0) continue;
        analytics::WorkOrder wo;
        wo.id = "WO-" + label_of(g, id);
        wo.equipment_id = label_of(g, id);
        wo.duration_hours = 4 + static_cast<std::int64_t>(std::min<std::size_t>(failures, 8));
        wo.cost = 75.0 * static_cast<double>(wo.duration_hours);
        wo.earliest_start = 0;
        wo.latest_start = kHorizonHours - wo.duration_hours;
        wo.cascade_dependents = analytics::cascade(g, id).affected.size();
        orders.push_back(std::move(wo));
    }

    Answer a;
    if (orders.empty()) {
        a.text = "No failure-prone equipment on record; nothing to schedule.";
        a.payload = {{"feasible", true}, {"front", nlohmann::json::array()}};
        return a;
    }

    analytics::Nsga2Options opts;
    opts.horizon_hours = kHorizonHours;
    auto result = analytics::nsga2_schedule(orders, opts);

    nlohmann::json front = nlohmann::json::array();
    for (const auto& plan : result.front) {
        nlohmann::json assignments = nlohmann::json::array();
        for (const auto& so : plan.assignments)
            assignments.push_back({{"work_order", so.work_order_id},
                                   {"start_hour", so.start_hour}});
        front.push_back({{"downtime_hours", plan.downtime_hours},
                         {"cost_units", plan.cost_units},
                         {"assignments", std::move(assignments)}});
    }
    a.payload = {{"feasible", result.feasible}, {"front", std::move(front)}};
    if (!result.feasible) {
        a.text = "No feasible schedule for " + std::to_string(orders.size()) +
                 " work orders within " + std::to_string(kHorizonHours) + " hours.";
    } else {
        a.text = std::to_string(result.front.size()) + " Pareto-optimal plans for " +
                 std::to_string(orders.size()) + " work orders; best downtime " +
                 fmt(result.front.front().downtime_hours) + " h at cost " +
                 fmt(result.front.front().cost_units) + ".";
    }
    return a;
}

inline std::optional<Answer> run_root_cause(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    constexpr std::int64_t kWindowSeconds = 72 * 3600;

    std::optional<NodeId> anchor_eq;
    std::optional<EventRec> anchor;
    std::string anchor_desc;

    if (auto wo = extract_work_order(q.text)) {
        for (NodeId eq : g.nodes_by_label("Equipment")) {
            for (const auto& ev : events_of(g, eq, "work_order")) {
                if (ev.payload.find(*wo) != std::string::npos) {
                    anchor_eq = eq;
                    anchor = ev;
                    break;
                }
            }
            if (anchor) break;
        }
        if (!anchor) {
            Answer a;
            a.text = "Work order " + *wo + " is not on record.";
            a.payload = result_table_json({});
            return a;
        }
        anchor_desc = *wo;
    } else if (auto eq = ctx.resolver.first(q.text)) {
        auto failures = events_of(g, *eq, "failure");
        if (failures.empty()) {
            Answer a;
            a.text = "No failures on record for " + display_of(g, *eq) + ".";
            a.payload = result_table_json({});
            return a;
        }
        anchor_eq = *eq;
        anchor = failures.back();
        anchor_desc = "the last failure of " + display_of(g, *eq);
    } else {
        return std::nullopt;
    }

    // the anchor's equipment plus everything it transitively depends on
    auto scope = dependency_closure(g, *anchor_eq, Direction::Out);
    std::vector<std::pair<EventRec, NodeId>> rows;
    for (NodeId eq : scope) {
        for (const auto& ev : events_of(g, eq)) {
            if (ev.ts.epoch_seconds > anchor->ts.epoch_seconds) continue;
            if (anchor->ts.epoch_seconds - ev.ts.epoch_seconds > kWindowSeconds) continue;
            rows.push_back({ev, eq});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.ts.epoch_seconds != b.first.ts.epoch_seconds)
            return a.first.ts.epoch_seconds < b.first.ts.epoch_seconds;
        return a.first.id < b.first.id;
    });

    TableBuilder tb({"timestamp", "equipment", "kind", "payload"});
    for (const auto& [ev, eq] : rows)
        tb.row({Scalar(ev.ts), Scalar(label_of(g, eq)), Scalar(ev.kind), Scalar(ev.payload)});
    return table_answer(std::to_string(rows.size()) + " events in the 72 h window leading to " +
                            anchor_desc + ".",
                        tb);
}

inline std::optional<Answer> run_temporal_mtbf(const Question& q, const RouterContext& ctx) {
    auto eq = ctx.resolver.first(q.text);
    if (!eq) return std::nullopt;

    analytics::MtbfOptions opts;
    if (auto year = extract_year(q.text)) {
        opts.window_start = Timestamp::from_civil(*year, 1, 1);
        opts.window_end = Timestamp::from_civil(*year, 12, 31, 23, 59, 59);
    }
    auto stat = analytics::mtbf(ctx.graph, *eq, opts);

    Answer a;
    a.payload = {{"equipment", label_of(ctx.graph, *eq)},
                 {"event_count", stat.event_count},
                 {"mean_gap_hours",
                  stat.mean_gap_hours ? nlohmann::json(*stat.mean_gap_hours)
                                      : nlohmann::json(nullptr)},
                 {"window_start", opts.window_start ? nlohmann::json(opts.window_start->to_iso8601())
                                                   : nlohmann::json(nullptr)},
                 {"window_end", opts.window_end ? nlohmann::json(opts.window_end->to_iso8601())
                                                : nlohmann::json(nullptr)}};
    if (stat.mean_gap_hours) {
        a.text = "MTBF for " + display_of(ctx.graph, *eq) + ": " + fmt(*stat.mean_gap_hours) +
                 " hours across " + std::to_string(stat.event_count) + " failures.";
    } else {
        a.text = "Fewer than two failures on record for " + display_of(ctx.graph, *eq) +
                 "; MTBF undefined.";
    }
    return a;
}

inline std::optional<Answer> run_multi_hop(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    auto eq = ctx.resolver.first(q.text);
    if (!eq) return std::nullopt;

    const bool wants_dependencies =
        std::regex_search(q.text, std::regex(R"(depends?\s+(?:up)?on)", std::regex::icase)) &&
        !std::regex_search(q.text, std::regex(R"(affected|impact)", std::regex::icase));

    Answer a;
    if (wants_dependencies) {
        auto closure = dependency_closure(g, *eq, Direction::Out);
        closure.erase(*eq);
        nlohmann::json deps = nlohmann::json::array();
        for (NodeId id : closure) deps.push_back(label_of(g, id));
        a.payload = {{"root", label_of(g, *eq)}, {"dependencies", std::move(deps)}};
        a.text = display_of(g, *eq) + " depends on " + std::to_string(closure.size()) +
                 " equipment.";
        return a;
    }

    auto report = analytics::cascade(g, *eq);
    nlohmann::json affected = nlohmann::json::array();
    std::ostringstream names;
    for (const auto& [id, hops] : report.affected) {
        affected.push_back({{"equipment", label_of(g, id)}, {"hops", hops}});
        if (names.tellp() > 0) names << ", ";
        names << display_of(g, id) << " (hop " << hops << ")";
    }
    a.payload = {{"root", label_of(g, *eq)}, {"affected", std::move(affected)}};
    if (report.affected.empty()) {
        a.text = "No equipment is affected if " + display_of(g, *eq) + " fails.";
    } else {
        a.text = std::to_string(report.affected.size()) + " equipment affected if " +
                 display_of(g, *eq) + " fails: " + names.str() + ".";
    }
    return a;
}

inline std::optional<Answer> run_correlation(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    constexpr std::int64_t kWindowSeconds = 24 * 3600;

    std::vector<NodeId> left, right;
    std::string left_name, right_name;
    auto instances = ctx.resolver.mentions(q.text);
    if (instances.size() >= 2) {
        left = {instances[0]};
        right = {instances[1]};
        left_name = display_of(g, instances[0]);
        right_name = display_of(g, instances[1]);
    } else {
        auto classes = ctx.resolver.class_mentions(q.text);
        if (classes.size() < 2) return std::nullopt;
        left = classes[0].second;
        right = classes[1].second;
        left_name = classes[0].first;
        right_name = classes[1].first;
    }

    auto symptomatic = [&](const std::vector<NodeId>& side) {
        std::vector<std::pair<std::int64_t, std::string>> out;
        for (NodeId eq : side)
            for (const auto& ev : events_of(g, eq))
                if (ev.kind != "work_order")
                    out.push_back({ev.ts.epoch_seconds, label_of(g, eq)});
        std::sort(out.begin(), out.end());
        return out;
    };
    auto ls = symptomatic(left);
    auto rs = symptomatic(right);

    std::size_t pairs = 0;
    nlohmann::json sample = nlohmann::json::array();
    std::vector<std::int64_t> rts;
    for (const auto& [t, eq] : rs) rts.push_back(t);
    for (const auto& [t, eq] : ls) {
        auto lo = std::lower_bound(rts.begin(), rts.end(), t - kWindowSeconds);
        auto hi = std::upper_bound(rts.begin(), rts.end(), t + kWindowSeconds);
        const std::size_t n = static_cast<std::size_t>(hi - lo);
        if (n > 0 && sample.size() < 10) {
            const std::size_t j = static_cast<std::size_t>(lo - rts.begin());
            sample.push_back(
                {{"left_ts", Timestamp{t}.to_iso8601()},
                 {"right_ts", Timestamp{rts[j]}.to_iso8601()},
                 {"gap_hours", static_cast<double>(std::llabs(rts[j] - t)) / 3600.0}});
        }
        pairs += n;
    }

    Answer a;
    a.payload = {{"left", left_name},       {"right", right_name},
                 {"window_hours", 24},      {"co_occurrences", pairs},
                 {"left_events", ls.size()}, {"right_events", rs.size()},
                 {"sample", std::move(sample)}};
    a.text = std::to_string(pairs) + " co-occurrences within 24 h between " + left_name +
             " and " + right_name + " symptomatic events (" + std::to_string(ls.size()) +
             " vs " + std::to_string(rs.size()) + " events).";
    return a;
}

inline std::optional<Answer> run_wo_bundling(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    constexpr std::int64_t kWindowSeconds = 7 * 86400;

    std::vector<NodeId> scope = ctx.resolver.mentions(q.text);
    if (scope.empty()) scope = g.nodes_by_label("Equipment");

    TableBuilder tb({"equipment", "bundle_start", "bundle_end", "work_orders"});
    std::size_t opportunities = 0;
    for (NodeId eq : scope) {
        auto orders = events_of(g, eq, "work_order");
        std::size_t begin = 0;
        for (std::size_t i = 1; i <= orders.size(); ++i) {
            const bool split =
                i == orders.size() ||
                orders[i].ts.epoch_seconds - orders[i - 1].ts.epoch_seconds > kWindowSeconds;
            if (!split) continue;
            if (i - begin >= 2) {
                tb.row({Scalar(label_of(g, eq)), Scalar(orders[begin].ts),
                        Scalar(orders[i - 1].ts), Scalar(static_cast<std::int64_t>(i - begin))});
                ++opportunities;
            }
            begin = i;
        }
    }
    return table_answer(std::to_string(opportunities) +
                            " bundling opportunities within a 7 day window.",
                        tb);
}

inline std::optional<Answer> run_rule_logic(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    auto scope = ctx.resolver.mentions(q.text);

    struct Row {
        std::string rule, equipment, sensor;
        double value, threshold;
        std::string status;
        Timestamp ts{0};
    };
    std::vector<Row> rows;
    std::size_t flagged = 0;

    for (NodeId rule_id : g.nodes_by_label("MonitoringRule")) {
        const Node& rule = g.node(rule_id);
        const std::string rule_name = text_of(g, rule_id, "name");
        const std::string sensor_type = ascii_lower(text_of(g, rule_id, "sensor_type"));
        const Scalar* threshold = rule.property("threshold");
        if (sensor_type.empty() || !threshold || !threshold->is_numeric()) continue;
        const std::string direction = text_of(g, rule_id, "direction");
        const bool above = direction != "below";

        for (const auto& owner : g.neighbors(rule_id, "HAS_RULE", Direction::In)) {
            if (!scope.empty() &&
                std::find(scope.begin(), scope.end(), owner.node) == scope.end())
                continue;
            for (const auto& sh : g.neighbors(owner.node, "HAS_SENSOR", Direction::Out)) {
                if (ascii_lower(text_of(g, sh.node, "type")) != sensor_type) continue;
                for (const auto& rh : g.neighbors(sh.node, "PRODUCED_READING", Direction::Out)) {
                    const Scalar* value = g.node(rh.node).property("value");
                    const Scalar* ts = g.node(rh.node).property("ts");
                    if (!value || !value->is_numeric()) continue;
                    const double v = value->as_double();
                    const bool hit = above ? v > threshold->as_double() : v < threshold->as_double();
                    if (hit) ++flagged;
                    rows.push_back({rule_name, label_of(g, owner.node),
                                    text_of(g, sh.node, "sensor_id"), v, threshold->as_double(),
                                    hit ? "anomaly" : "ok",
                                    ts && ts->is_time() ? ts->time() : Timestamp{0}});
                }
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.rule, a.equipment, a.sensor, a.ts.epoch_seconds) <
               std::tie(b.rule, b.equipment, b.sensor, b.ts.epoch_seconds);
    });

    TableBuilder tb({"rule", "equipment", "sensor", "value", "threshold", "status"});
    for (const auto& r : rows)
        tb.row({Scalar(r.rule), Scalar(r.equipment), Scalar(r.sensor), Scalar(r.value),
                Scalar(r.threshold), Scalar(r.status)});
    if (rows.empty())
        return table_answer("No monitoring rules with readings to evaluate.", tb);
    return table_answer(std::to_string(flagged) + " of " + std::to_string(rows.size()) +
                            " readings violate monitoring rules.",
                        tb);
}

inline std::optional<Answer> run_phm_health(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    auto eq = ctx.resolver.first(q.text);
    if (!eq) return std::nullopt;

    const auto failures = events_of(g, *eq, "failure");
    const auto alerts = events_of(g, *eq, "alert");
    const auto anomalies = events_of(g, *eq, "anomaly");
    const auto work_orders = events_of(g, *eq, "work_order");
    const auto stat = analytics::mtbf(g, *eq);
    const std::size_t sensors = g.neighbors(*eq, "HAS_SENSOR", Direction::Out).size();

    TableBuilder tb({"metric", "value"});
    tb.row({Scalar(std::string("sensors")), Scalar(static_cast<std::int64_t>(sensors))});
    tb.row({Scalar(std::string("failures")), Scalar(static_cast<std::int64_t>(failures.size()))});
    tb.row({Scalar(std::string("alerts")), Scalar(static_cast<std::int64_t>(alerts.size()))});
    tb.row({Scalar(std::string("anomalies")),
            Scalar(static_cast<std::int64_t>(anomalies.size()))});
    tb.row({Scalar(std::string("work_orders")),
            Scalar(static_cast<std::int64_t>(work_orders.size()))});
    tb.row({Scalar(std::string("last_failure")),
            failures.empty() ? std::optional<Scalar>() : Scalar(failures.back().ts)});
    tb.row({Scalar(std::string("mtbf_hours")),
            stat.mean_gap_hours ? std::optional<Scalar>(Scalar(*stat.mean_gap_hours))
                                : std::optional<Scalar>()});

    std::ostringstream text;
    text << "Health profile for " << display_of(g, *eq) << ": " << failures.size()
         << " failures, " << work_orders.size() << " work orders";
    if (stat.mean_gap_hours) text << ", MTBF " << fmt(*stat.mean_gap_hours) << " h";
    text << ".";
    return table_answer(text.str(), tb);
}

inline std::optional<Answer> run_event_count(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    const std::string lowered = ascii_lower(q.text);

    // non-event nouns are answered by direct counts
    static const std::vector<std::pair<std::string, std::string>> label_nouns = {
        {"sensor", "Sensor"}, {"site", "Site"}, {"location", "Location"},
        {"failure mode", "FailureMode"}};
    for (const auto& [noun, label] : label_nouns) {
        if (lowered.find(noun) == std::string::npos) continue;
        if (noun == "sensor" && lowered.find("sensor reading") != std::string::npos) break;
        std::size_t count = 0;
        if (label == "Sensor") {
            if (auto eq = ctx.resolver.first(q.text))
                count = g.neighbors(*eq, "HAS_SENSOR", Direction::Out).size();
            else
                count = g.nodes_by_label(label).size();
        } else {
            count = g.nodes_by_label(label).size();
        }
        TableBuilder tb({"count"});
        tb.row({Scalar(static_cast<std::int64_t>(count))});
        return table_answer(std::to_string(count) + " " + noun + (count == 1 ? "" : "s") + ".",
                            tb);
    }

    std::string kind;
    std::string noun = "events";
    if (lowered.find("work order") != std::string::npos) {
        kind = "work_order";
        noun = "work orders";
    } else if (lowered.find("alert") != std::string::npos) {
        kind = "alert";
        noun = "alerts";
    } else if (lowered.find("anomal") != std::string::npos) {
        kind = "anomaly";
        noun = "anomalies";
    } else if (lowered.find("failure") != std::string::npos) {
        kind = "failure";
        noun = "failures";
    }

    std::optional<std::string> equipment_ref;
    if (auto eq = ctx.resolver.first(q.text)) {
        equipment_ref = text_of(g, *eq, "equipment_id");
    } else {
        std::smatch m;
        static const std::regex raw_id(R"(\b[A-Z]{2,4}\d{4,6}\b)");
        if (std::regex_search(q.text, m, raw_id)) equipment_ref = m[0].str();
    }
    auto year = extract_year(q.text);

    std::string query = "MATCH (e:Event)";
    std::vector<std::string> conds;
    if (equipment_ref) conds.push_back("e.equipment_id = '" + *equipment_ref + "'");
    if (year) conds.push_back("e.year = " + std::to_string(*year));
    if (!kind.empty()) conds.push_back("e.kind = '" + kind + "'");
    for (std::size_t i = 0; i < conds.size(); ++i)
        query += (i == 0 ? " WHERE " : " AND ") + conds[i];
    query += " RETURN count(e) AS events";

    auto table = cypher::execute(cypher::parse(query), g);
    const std::int64_t count =
        table.rows.empty() || !table.rows[0][0] ? 0 : table.rows[0][0]->integer();

    std::ostringstream text;
    text << count << " " << noun;
    if (equipment_ref) text << " for " << *equipment_ref;
    if (year) text << " in " << *year;
    text << ".";

    Answer a;
    a.text = text.str();
    a.payload = result_table_json(table);
    return a;
}

inline std::optional<Answer> run_fmsr(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    auto mode = ctx.resolver.failure_mode(q.text);
    auto eq = ctx.resolver.first(q.text);

    if (mode) {
        // mode -> sensors able to detect it, optionally scoped to one asset
        TableBuilder tb({"sensor", "type", "equipment"});
        std::vector<std::tuple<std::string, std::string, std::string>> rows;
        for (const auto& hit : g.neighbors(*mode, "MONITORS", Direction::In)) {
            auto owners = g.neighbors(hit.node, "HAS_SENSOR", Direction::In);
            const NodeId owner = owners.empty() ? 0 : owners.front().node;
            if (eq && owner != *eq) continue;
            rows.push_back({text_of(g, hit.node, "sensor_id"), text_of(g, hit.node, "type"),
                            owners.empty() ? "" : label_of(g, owner)});
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& [sensor, type, owner] : rows)
            tb.row({Scalar(sensor), Scalar(type), Scalar(owner)});
        const std::string mode_name = text_of(g, *mode, "name");
        return table_answer(std::to_string(rows.size()) + " sensors can detect " + mode_name +
                                (eq ? " on " + display_of(g, *eq) : "") + ".",
                            tb);
    }

    if (eq) {
        // asset -> failure modes its sensors can detect
        std::map<std::string, std::set<std::string>> modes;
        for (const auto& sh : g.neighbors(*eq, "HAS_SENSOR", Direction::Out))
            for (const auto& mh : g.neighbors(sh.node, "MONITORS", Direction::Out))
                modes[text_of(g, mh.node, "name")].insert(text_of(g, sh.node, "type"));
        TableBuilder tb({"failure_mode", "detected_by"});
        for (const auto& [name, types] : modes) {
            std::string joined;
            for (const auto& t : types) joined += (joined.empty() ? "" : ", ") + t;
            tb.row({Scalar(name), Scalar(joined)});
        }
        return table_answer(std::to_string(modes.size()) + " failure modes detectable on " +
                                display_of(g, *eq) + ".",
                            tb);
    }
    return std::nullopt;
}

inline std::optional<Answer> run_wo_lookup(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    auto scope = ctx.resolver.mentions(q.text);
    if (scope.empty()) scope = g.nodes_by_label("Equipment");
    auto year = extract_year(q.text);

    std::vector<std::pair<EventRec, NodeId>> rows;
    for (NodeId eq : scope)
        for (const auto& ev : events_of(g, eq, "work_order")) {
            if (year) {
                int y = 0;
                unsigned mo = 0, d = 0;
                Timestamp::civil_from_days(ev.ts.epoch_seconds >= 0
                                               ? ev.ts.epoch_seconds / 86400
                                               : (ev.ts.epoch_seconds - 86399) / 86400,
                                           y, mo, d);
                if (y != *year) continue;
            }
            rows.push_back({ev, eq});
        }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.ts.epoch_seconds != b.first.ts.epoch_seconds)
            return a.first.ts.epoch_seconds > b.first.ts.epoch_seconds;
        return a.first.id < b.first.id;
    });

    TableBuilder tb({"timestamp", "equipment", "work_order"});
    for (const auto& [ev, eq] : rows)
        tb.row({Scalar(ev.ts), Scalar(label_of(g, eq)), Scalar(ev.payload)});
    std::ostringstream text;
    text << rows.size() << " work orders";
    if (scope.size() == 1) text << " for " << display_of(g, scope.front());
    if (year) text << " in " << *year;
    text << ", most recent first.";
    return table_answer(text.str(), tb);
}

inline std::optional<Answer> run_iot_status(const Question& q, const RouterContext& ctx) {
    const PropertyGraph& g = ctx.graph;
    if (auto eq = ctx.resolver.first(q.text)) {
        TableBuilder tb({"sensor", "type", "unit", "range_min", "range_max"});
        std::vector<NodeId> sensors;
        for (const auto& hit : g.neighbors(*eq, "HAS_SENSOR", Direction::Out))
            sensors.push_back(hit.node);
        std::sort(sensors.begin(), sensors.end(), [&](NodeId a, NodeId b) {
            return text_of(g, a, "sensor_id") < text_of(g, b, "sensor_id");
        });
        for (NodeId s : sensors) {
            const Scalar* lo = g.node(s).property("range_min");
            const Scalar* hi = g.node(s).property("range_max");
            tb.row({Scalar(text_of(g, s, "sensor_id")), Scalar(text_of(g, s, "type")),
                    Scalar(text_of(g, s, "unit")),
                    lo && lo->is_numeric() ? std::optional<Scalar>(Scalar(lo->as_double()))
                                           : std::optional<Scalar>(),
                    hi && hi->is_numeric() ? std::optional<Scalar>(Scalar(hi->as_double()))
                                           : std::optional<Scalar>()});
        }
        return table_answer(std::to_string(sensors.size()) + " sensors on " +
                                display_of(g, *eq) + ".",
                            tb);
    }

    const std::string lowered = ascii_lower(q.text);
    const bool wants_sites = lowered.find("site") != std::string::npos ||
                             lowered.find("location") != std::string::npos;
    const bool wants_equipment = lowered.find("equipment") != std::string::npos ||
                                 lowered.find("asset") != std::string::npos;
    if (wants_sites && !wants_equipment) {
        TableBuilder tb({"site", "location"});
        for (NodeId site : g.nodes_by_label("Site"))
            for (const auto& hit : g.neighbors(site, "CONTAINS_LOCATION", Direction::Out))
                tb.row({Scalar(text_of(g, site, "name")), Scalar(text_of(g, hit.node, "name"))});
        return table_answer(std::to_string(tb.table.rows.size()) + " locations.", tb);
    }
    if (wants_equipment) {
        TableBuilder tb({"equipment", "name", "location"});
        for (NodeId eq : g.nodes_by_label("Equipment")) {
            auto loc = g.neighbors(eq, "CONTAINS_EQUIPMENT", Direction::In);
            tb.row({Scalar(label_of(g, eq)), Scalar(text_of(g, eq, "name")),
                    loc.empty() ? std::optional<Scalar>()
                                : std::optional<Scalar>(
                                      Scalar(text_of(g, loc.front().node, "name")))});
        }
        return table_answer(std::to_string(tb.table.rows.size()) + " equipment on record.", tb);
    }
    return std::nullopt;
}

} // namespace router_detail

// ordered most-specific first; the router takes the first trigger match
inline const std::vector<HandlerSpec>& handler_catalog() {
    static const std::vector<HandlerSpec> catalog = {
        {"failure-similarity",
         {R"(similar)", R"(resembl)", R"(like\s+the\s+failures?)"},
         router_detail::run_failure_similarity},
        {"criticality",
         {R"(criticalit)", R"(most\s+critical)", R"(critical\s+(equipment|assets?))",
          R"(rank\b.*\b(equipment|assets?)\b)"},
         router_detail::run_criticality},
        {"maintenance-optimization",
         {R"(schedule\s+maintenance)", R"(minimi[sz])", R"(optimi[sz])",
          R"(maintenance\s+(plan|schedule))", R"(pareto)"},
         router_detail::run_maintenance_optimization},
        {"root-cause",
         {R"(root\s+cause)", R"(trace\s+(the\s+)?events)", R"(lead(ing)?\s+(up\s+)?to)",
          R"(what\s+led\s+to)", R"(why\s+did\b.*\bfail)"},
         router_detail::run_root_cause},
        {"temporal-mtbf",
         {R"(\bmtbf\b)", R"(mean\s+time\s+between)", R"(failure\s+(rate|interval|frequency))",
          R"(how\s+often\b.*\bfail)"},
         router_detail::run_temporal_mtbf},
        {"multi-hop-dependency",
         {R"(affected\s+if)", R"(impact\s+of)", R"(depends?\s+(up)?on)", R"(downstream)",
          R"(cascade)", R"(ripple)"},
         router_detail::run_multi_hop},
        {"cross-asset-correlation",
         {R"(correlat)", R"(coincide)", R"(co-?occur)"},
         router_detail::run_correlation},
        {"work-order-bundling",
         {R"(bundl)", R"(group\b.{0,30}work\s+orders)", R"(consolidat)"},
         router_detail::run_wo_bundling},
        {"rule-logic",
         {R"(monitoring\s+rules?)", R"(rules?\b.{0,40}(violat|evaluat|breach|trigger))",
          R"(evaluate\b.{0,30}rules?)", R"(threshold)"},
         router_detail::run_rule_logic},
        {"phm-health",
         {R"(health\s+(profile|report|status|summary))", R"(asset\s+health)",
          R"(condition\s+of)", R"(prognos)", R"(how\s+healthy)"},
         router_detail::run_phm_health},
        {"event-count",
         {R"(how\s+many)", R"(count\s+of)", R"(number\s+of)", R"(\bcount\b)"},
         router_detail::run_event_count},
        {"fmsr-mapping",
         {R"((which|what)\s+sensors\b.{0,40}(detect|monitor|catch|cover))",
          R"(sensors?\s+(that\s+|can\s+|to\s+)?(detect|monitor|catch))", R"(detectable)",
          R"((which|what)\s+failure\s+modes)", R"(failure\s+modes?\s+(of|for))"},
         router_detail::run_fmsr},
        {"work-order-lookup",
         {R"(work\s+orders?)", R"(maintenance\s+(history|records?|log))"},
         router_detail::run_wo_lookup},
        {"iot-status",
         {R"(what\s+sensors)", R"(list\b.{0,20}(sensors|equipment|assets|sites|locations))",
          R"(status\s+of)", R"(latest\s+reading)", R"(sensors?\s+(on|of|for)\b)",
          R"(inventory)"},
         router_detail::run_iot_status},
    };
    return catalog;
}

} // namespace assetgraph::router
