#pragma once

// Query execution over a PropertyGraph. Semantics pinned here:
// - bag semantics; DISTINCT dedupes projected rows
// - two-valued logic: a comparison involving null or mismatched types is false
// - unknown property access yields null, never an error
// - entity variables project as their external id text
// - aggregates skip nulls; count of empty is 0, sum of empty is 0,
//   avg/min/max of empty are null; sum and avg skip non-numeric inputs
// - ORDER BY: nulls last (ASC and DESC); mixed kinds rank text < numeric <
//   boolean < time; ties broken by the row's named variable bindings in
//   variable-name order (dropped after DISTINCT or aggregation, which erase
//   row identity), then by cell content
// - relationship uniqueness within a MATCH clause; an undirected self-loop
//   matches once
// CREATE materializes with the supplied provenance; on LlmDerived the store
// injects source="LLM-derived" where absent.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "assetgraph/cypher/ast.hpp"
#include "assetgraph/cypher/plan.hpp"
#include "assetgraph/error.hpp"
#include "assetgraph/graph.hpp"

namespace assetgraph::cypher {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<Scalar>>> rows;
};

struct ExecOptions {
    bool use_indices = true;
};

struct CreateResult {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
};

// ---- semantic validation ----

namespace exec_detail {

struct BoundEntity {
    bool is_edge = false;
    std::uint64_t id = 0;
};
using Binding = std::map<std::string, BoundEntity>;

inline void check_operand_vars(const Operand& op, const std::set<std::string>& vars) {
    if (op.kind == Operand::Kind::Literal) return;
    if (!vars.count(op.var)) throw ValidationError("unbound variable '" + op.var + "'");
}

inline void check_bool_vars(const BoolExprPtr& e, const std::set<std::string>& vars) {
    if (!e) return;
    if (e->kind == BoolExpr::Kind::Comparison) {
        check_operand_vars(e->cmp.lhs, vars);
        check_operand_vars(e->cmp.rhs, vars);
        return;
    }
    check_bool_vars(e->lhs, vars);
    check_bool_vars(e->rhs, vars);
}

} // namespace exec_detail

inline void validate(const Query& q) {
    if (q.is_create()) {
        // Full static check so execute_create never fails after its first
        // mutation: binding rules mirror the execution-time env exactly.
        std::set<std::string> bound;
        for (const auto& path : q.creates) {
            for (const auto& np : path.nodes) {
                if (!np.var) continue;
                if (bound.count(*np.var)) {
                    if (!np.labels.empty() || !np.props.empty())
                        throw ValidationError("variable '" + *np.var +
                                              "' already bound in CREATE");
                } else {
                    if (np.labels.empty() && np.props.empty())
                        throw ValidationError("unbound variable '" + *np.var + "' in CREATE");
                    bound.insert(*np.var);
                }
            }
            for (const auto& ep : path.edges) {
                if (ep.types.size() != 1)
                    throw ValidationError("CREATE relationship requires exactly one type");
                if (ep.direction == Direction::Both)
                    throw ValidationError("CREATE relationship requires a direction");
                if (!is_edge_type_name(ep.types[0]))
                    throw ValidationError("CREATE relationship type '" + ep.types[0] +
                                          "' must be an uppercase-snake name");
            }
        }
        return;
    }
    std::set<std::string> node_vars, edge_vars;
    for (const auto& clause : q.matches) {
        for (const auto& path : clause.patterns) {
            for (const auto& np : path.nodes)
                if (np.var) node_vars.insert(*np.var);
            for (const auto& ep : path.edges) {
                if (!ep.var) continue;
                if (!edge_vars.insert(*ep.var).second)
                    throw ValidationError("relationship variable '" + *ep.var + "' reused");
            }
        }
    }
    for (const auto& v : edge_vars)
        if (node_vars.count(v))
            throw ValidationError("variable '" + v + "' bound as both node and relationship");
    std::set<std::string> all_vars = node_vars;
    all_vars.insert(edge_vars.begin(), edge_vars.end());
    exec_detail::check_bool_vars(q.where, all_vars);

    std::set<std::string> aliases;
    bool aggregated = false;
    for (const auto& item : q.items) {
        if (item.expr.is_aggregate()) aggregated = true;
        if (item.expr.kind != ReturnExpr::Kind::CountStar)
            exec_detail::check_operand_vars(item.expr.operand, all_vars);
        if (item.alias) aliases.insert(*item.alias);
    }
    for (const auto& o : q.order_by) {
        if (o.expr.is_aggregate()) {
            if (!aggregated)
                throw ValidationError("ORDER BY aggregate requires an aggregated RETURN");
            continue;
        }
        if (o.expr.operand.kind == Operand::Kind::Variable &&
            aliases.count(o.expr.operand.var))
            continue;
        exec_detail::check_operand_vars(o.expr.operand, all_vars);
    }
}

// ---- evaluation helpers ----

namespace exec_detail {

inline std::optional<Scalar> lookup_property(const PropertyGraph& g, const BoundEntity& e,
                                             const std::string& prop) {
    const Scalar* v =
        e.is_edge ? g.edge(e.id).property(prop) : g.node(e.id).property(prop);
    if (!v) return std::nullopt;
    return *v;
}

inline std::optional<Scalar> eval_operand(const Operand& op, const Binding& b,
                                          const PropertyGraph& g) {
    switch (op.kind) {
        case Operand::Kind::Literal: return op.literal;
        case Operand::Kind::Variable: {
            const BoundEntity& e = b.at(op.var);
            return Scalar(PropertyGraph::external_id(e.id));
        }
        case Operand::Kind::Property: return lookup_property(g, b.at(op.var), op.prop);
    }
    return std::nullopt;
}

inline bool eval_comparison(const Comparison& cmp, const Binding& b, const PropertyGraph& g) {
    std::optional<Scalar> l = eval_operand(cmp.lhs, b, g);
    std::optional<Scalar> r = eval_operand(cmp.rhs, b, g);
    if (!l || !r) return false;
    if (cmp.op == Cmp::Contains || cmp.op == Cmp::StartsWith) {
        if (!l->is_text() || !r->is_text()) return false;
        if (cmp.op == Cmp::Contains) return l->text().find(r->text()) != std::string::npos;
        return l->text().rfind(r->text(), 0) == 0;
    }
    std::optional<int> c = l->compare(*r);
    if (!c) return false;
    switch (cmp.op) {
        case Cmp::Eq: return *c == 0;
        case Cmp::Ne: return *c != 0;
        case Cmp::Lt: return *c < 0;
        case Cmp::Le: return *c <= 0;
        case Cmp::Gt: return *c > 0;
        case Cmp::Ge: return *c >= 0;
        default: return false;
    }
}

inline bool eval_bool(const BoolExprPtr& e, const Binding& b, const PropertyGraph& g) {
    switch (e->kind) {
        case BoolExpr::Kind::Comparison: return eval_comparison(e->cmp, b, g);
        case BoolExpr::Kind::And: return eval_bool(e->lhs, b, g) && eval_bool(e->rhs, b, g);
        case BoolExpr::Kind::Or: return eval_bool(e->lhs, b, g) || eval_bool(e->rhs, b, g);
        case BoolExpr::Kind::Not: return !eval_bool(e->lhs, b, g);
    }
    return false;
}

inline bool scalar_matches(const Scalar& actual, const Scalar& wanted) {
    std::optional<int> c = actual.compare(wanted);
    return c && *c == 0;
}

inline bool check_node(const PropertyGraph& g, NodeId id, const VarConstraints& vc) {
    const Node& n = g.node(id);
    for (const auto& l : vc.labels)
        if (!n.has_label(l)) return false;
    for (const auto& [k, v] : vc.props) {
        const Scalar* actual = n.property(k);
        if (!actual || !scalar_matches(*actual, v)) return false;
    }
    return true;
}

inline bool check_edge(const Edge& e, const EdgeOcc& occ) {
    if (!occ.types.empty() && e.type != occ.types[0]) return false;
    for (const auto& [k, v] : occ.props) {
        const Scalar* actual = e.property(k);
        if (!actual || !scalar_matches(*actual, v)) return false;
    }
    return true;
}

inline Direction relative_direction(const EdgeOcc& occ, bool from_is_left) {
    if (from_is_left) return occ.direction;
    switch (occ.direction) {
        case Direction::Out: return Direction::In;
        case Direction::In: return Direction::Out;
        case Direction::Both: return Direction::Both;
    }
    return Direction::Both;
}

// Mixed-kind ordering: text < numeric < boolean < time; numerics merge.
inline int order_rank(const Scalar& v) {
    switch (v.kind()) {
        case Scalar::Kind::Text: return 0;
        case Scalar::Kind::Integer:
        case Scalar::Kind::Float: return 1;
        case Scalar::Kind::Boolean: return 2;
        case Scalar::Kind::Time: return 3;
    }
    return 0;
}

inline int order_compare(const Scalar& a, const Scalar& b) {
    int ra = order_rank(a), rb = order_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    std::optional<int> c = a.compare(b);
    return c ? *c : 0;
}

// Last-resort row order for ties: cell by cell, nulls after values, mixed
// kinds by order_rank, equal-valued mixed numerics with Integer first.
inline bool content_less(const std::vector<std::optional<Scalar>>& x,
                         const std::vector<std::optional<Scalar>>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = x[i];
        const auto& b = y[i];
        if (!a && !b) continue;
        if (!a) return false;
        if (!b) return true;
        int c = order_compare(*a, *b);
        if (c != 0) return c < 0;
        if (a->kind() != b->kind())
            return static_cast<int>(a->kind()) < static_cast<int>(b->kind());
    }
    return x.size() < y.size();
}

/// Grouping/DISTINCT key: equal-by-query-semantics cells encode identically
// (5 and 5.0 collapse); length prefixes keep text unambiguous.
inline std::string encode_cell(const std::optional<Scalar>& v) {
    if (!v) return "~;";
    switch (v->kind()) {
        case Scalar::Kind::Text:
            return "t" + std::to_string(v->text().size()) + ":" + v->text() + ";";
        case Scalar::Kind::Boolean: return v->boolean() ? "b1;" : "b0;";
        case Scalar::Kind::Time:
            return "s" + std::to_string(v->time().epoch_seconds) + ";";
        case Scalar::Kind::Integer: return "n" + std::to_string(v->integer()) + ";";
        case Scalar::Kind::Float: {
            double d = v->floating();
            if (d == static_cast<std::int64_t>(d) && d >= -9.2e18 && d <= 9.2e18)
                return "n" + std::to_string(static_cast<std::int64_t>(d)) + ";";
            return "n" + Scalar::render_double(d) + ";";
        }
    }
    return "~;";
}

inline std::string encode_row(const std::vector<std::optional<Scalar>>& cells) {
    std::string out;
    for (const auto& c : cells) out += encode_cell(c);
    return out;
}

// ---- pattern enumeration ----

struct Enumerator {
    const PropertyGraph& graph;
    const Plan& plan;
    const std::function<void(const Binding&)>& emit;
    Binding binding;

    void run() { run_clause(0); }

    void run_clause(std::size_t ci) {
        if (ci == plan.clauses.size()) {
            emit(binding);
            return;
        }
        std::set<EdgeId> used;
        run_op(ci, 0, used);
    }

    void run_op(std::size_t ci, std::size_t oi, std::set<EdgeId>& used) {
        const ClausePlan& cp = plan.clauses[ci];
        if (oi == cp.ops.size()) {
            run_clause(ci + 1);
            return;
        }
        const ClauseOp& op = cp.ops[oi];
        if (op.kind == ClauseOp::Kind::Seed)
            run_seed(ci, oi, used, op.seed);
        else
            run_expand(ci, oi, used, op.expand);
    }

    void run_seed(std::size_t ci, std::size_t oi, std::set<EdgeId>& used, const SeedStep& seed) {
        const ClausePlan& cp = plan.clauses[ci];
        const VarConstraints& vc = cp.node_vars.at(seed.var);
        auto try_candidate = [&](NodeId id) {
            if (!check_node(graph, id, vc)) return;
            binding[seed.var] = {false, id};
            run_op(ci, oi + 1, used);
            binding.erase(seed.var);
        };
        switch (seed.kind) {
            case SeedStep::Kind::BoundRef: {
                const BoundEntity& e = binding.at(seed.var);
                if (check_node(graph, e.id, vc)) run_op(ci, oi + 1, used);
                return;
            }
            case SeedStep::Kind::IndexSeek: {
                // the property index is kind-exact but query equality merges
                // numeric kinds, so an integral seek value probes both entries
                std::vector<NodeId> hits =
                    graph.nodes_by_property(seed.label, seed.prop, seed.value);
                std::optional<Scalar> twin;
                if (seed.value.is_integer()) {
                    twin = Scalar(static_cast<double>(seed.value.integer()));
                } else if (seed.value.is_float()) {
                    const double d = seed.value.floating();
                    if (d == static_cast<std::int64_t>(d) && d >= -9.2e18 && d <= 9.2e18)
                        twin = Scalar(static_cast<std::int64_t>(d));
                }
                if (twin) {
                    std::vector<NodeId> more =
                        graph.nodes_by_property(seed.label, seed.prop, *twin);
                    hits.insert(hits.end(), more.begin(), more.end());
                    std::sort(hits.begin(), hits.end());
                    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
                }
                for (NodeId id : hits) try_candidate(id);
                return;
            }
            case SeedStep::Kind::LabelScan:
                for (NodeId id : graph.nodes_by_label(seed.label)) try_candidate(id);
                return;
            case SeedStep::Kind::AllNodesScan:
                for (const auto& [id, node] : graph.nodes()) try_candidate(id);
                return;
        }
    }

    void run_expand(std::size_t ci, std::size_t oi, std::set<EdgeId>& used,
                    const ExpandStep& step) {
        const ClausePlan& cp = plan.clauses[ci];
        const EdgeOcc& occ = cp.edges[step.edge_index];
        const NodeId from = binding.at(step.from_var).id;
        const Direction dir = relative_direction(occ, step.from_is_left);
        const std::string type = occ.types.empty() ? "" : occ.types[0];
        const auto hits = graph.neighbors(from, type, dir);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            // An undirected self-loop is reported once per traversal direction
            // but matches a single assignment.
            if (dir == Direction::Both && i > 0 && hits[i].edge == hits[i - 1].edge) continue;
            if (used.count(hits[i].edge)) continue;
            const Edge& e = graph.edge(hits[i].edge);
            if (!check_edge(e, occ)) continue;
            bool bound_edge_var = false;
            if (occ.var) {
                binding[*occ.var] = {true, hits[i].edge};
                bound_edge_var = true;
            }
            auto it = binding.find(step.to_var);
            bool ok;
            bool bound_target = false;
            if (it != binding.end()) {
                ok = !it->second.is_edge && it->second.id == hits[i].node;
            } else {
                ok = check_node(graph, hits[i].node, cp.node_vars.at(step.to_var));
                if (ok) {
                    binding[step.to_var] = {false, hits[i].node};
                    bound_target = true;
                }
            }
            if (ok) {
                used.insert(hits[i].edge);
                run_op(ci, oi + 1, used);
                used.erase(hits[i].edge);
            }
            if (bound_target) binding.erase(step.to_var);
            if (bound_edge_var) binding.erase(*occ.var);
        }
    }
};

struct OutRow {
    std::vector<std::optional<Scalar>> cells;
    std::vector<std::pair<std::string, std::uint64_t>> tiebreak;
    Binding binding;    // kept for ORDER BY on non-projected expressions
};

struct Aggregator {
    std::int64_t count = 0;
    std::int64_t isum = 0;
    double fsum = 0;
    bool saw_float = false;
    std::int64_t numeric_count = 0;
    std::optional<Scalar> min_v, max_v;

    void feed(const std::optional<Scalar>& v) {
        if (!v) return;
        ++count;
        if (v->is_numeric()) {
            ++numeric_count;
            if (v->is_float()) {
                saw_float = true;
                fsum += v->floating();
            } else {
                isum += v->integer();
            }
        }
        if (!min_v || order_compare(*v, *min_v) < 0) min_v = *v;
        if (!max_v || order_compare(*v, *max_v) > 0) max_v = *v;
    }

    std::optional<Scalar> result(AggFunc f) const {
        switch (f) {
            case AggFunc::Count: return Scalar(count);
            case AggFunc::Sum:
                if (saw_float) return Scalar(fsum + static_cast<double>(isum));
                return Scalar(isum);
            case AggFunc::Avg:
                if (numeric_count == 0) return std::nullopt;
                return Scalar((fsum + static_cast<double>(isum)) /
                              static_cast<double>(numeric_count));
            case AggFunc::Min: return min_v;
            case AggFunc::Max: return max_v;
        }
        return std::nullopt;
    }
};

} // namespace exec_detail

// ---- execute ----

inline ResultTable execute(const Query& q, const PropertyGraph& graph,
                           const ExecOptions& opts = {}) {
    using namespace exec_detail;
    if (q.is_create()) throw ValidationError("execute() requires a read query");
    validate(q);
    const Plan p = plan(q, graph, {opts.use_indices});

    ResultTable table;
    for (const auto& item : q.items)
        table.columns.push_back(item.alias ? *item.alias : render(item.expr));

    // Enumerate bindings, apply WHERE.
    std::vector<Binding> matches;
    std::function<void(const Binding&)> emit = [&](const Binding& b) {
        if (q.where && !eval_bool(q.where, b, graph)) return;
        matches.push_back(b);
    };
    Enumerator{graph, p, emit, {}}.run();

    const bool aggregated = p.aggregated;
    std::vector<OutRow> rows;

    auto eval_expr = [&](const ReturnExpr& e, const Binding& b) -> std::optional<Scalar> {
        return eval_operand(e.operand, b, graph);
    };
    // Anonymous pattern slots (synthesized '$n' names) are invisible to the
    // query text, so they do not participate in ordering.
    auto tiebreak_of = [&](const Binding& b) {
        std::vector<std::pair<std::string, std::uint64_t>> t;
        t.reserve(b.size());
        for (const auto& [var, ent] : b)
            if (!var.empty() && var[0] != '$') t.emplace_back(var, ent.id);
        return t;
    };

    if (!aggregated) {
        rows.reserve(matches.size());
        for (const auto& b : matches) {
            OutRow row;
            for (const auto& item : q.items) row.cells.push_back(eval_expr(item.expr, b));
            row.tiebreak = tiebreak_of(b);
            row.binding = b;
            rows.push_back(std::move(row));
        }
    } else {
        // Group by the non-aggregate items, in first-seen order.
        std::vector<std::size_t> group_idx, agg_idx;
        for (std::size_t i = 0; i < q.items.size(); ++i)
            (q.items[i].expr.is_aggregate() ? agg_idx : group_idx).push_back(i);
        struct Group {
            std::vector<std::optional<Scalar>> keys;
            std::vector<Aggregator> aggs;
            std::vector<std::int64_t> star_counts;
            Binding first_binding;
        };
        std::map<std::string, std::size_t> group_of;
        std::vector<Group> groups;
        for (const auto& b : matches) {
            std::vector<std::optional<Scalar>> keys;
            keys.reserve(group_idx.size());
            for (std::size_t gi : group_idx) keys.push_back(eval_expr(q.items[gi].expr, b));
            const std::string key = encode_row(keys);
            auto [it, inserted] = group_of.try_emplace(key, groups.size());
            if (inserted) {
                Group g;
                g.keys = std::move(keys);
                g.aggs.resize(agg_idx.size());
                g.star_counts.resize(agg_idx.size(), 0);
                g.first_binding = b;
                groups.push_back(std::move(g));
            }
            Group& g = groups[it->second];
            for (std::size_t k = 0; k < agg_idx.size(); ++k) {
                const ReturnExpr& e = q.items[agg_idx[k]].expr;
                if (e.kind == ReturnExpr::Kind::CountStar)
                    g.star_counts[k]++;
                else
                    g.aggs[k].feed(eval_expr(e, b));
            }
        }
        if (groups.empty() && group_idx.empty()) {
            // Aggregate over zero rows still yields one row.
            Group g;
            g.aggs.resize(agg_idx.size());
            g.star_counts.resize(agg_idx.size(), 0);
            groups.push_back(std::move(g));
        }
        for (const auto& g : groups) {
            OutRow row;
            row.cells.resize(q.items.size());
            for (std::size_t k = 0; k < group_idx.size(); ++k) row.cells[group_idx[k]] = g.keys[k];
            for (std::size_t k = 0; k < agg_idx.size(); ++k) {
                const ReturnExpr& e = q.items[agg_idx[k]].expr;
                row.cells[agg_idx[k]] = (e.kind == ReturnExpr::Kind::CountStar)
                                            ? std::optional<Scalar>(Scalar(g.star_counts[k]))
                                            : g.aggs[k].result(e.func);
            }
            row.binding = g.first_binding;
            rows.push_back(std::move(row));
        }
    }

    if (q.distinct) {
        std::set<std::string> seen;
        std::vector<OutRow> unique;
        for (auto& row : rows)
            if (seen.insert(encode_row(row.cells)).second) unique.push_back(std::move(row));
        rows = std::move(unique);
        // Which duplicate survives depends on enumeration order, so the
        // surviving binding no longer identifies the row; ordering ties fall
        // through to cell content instead.
        for (auto& row : rows) row.tiebreak.clear();
    }

    if (!q.order_by.empty()) {
        // Resolve each key to a projected column where possible; otherwise
        // evaluate against the row's binding (non-aggregated queries only).
        struct Key {
            int column = -1;
            const ReturnExpr* expr = nullptr;
            bool desc = false;
        };
        std::vector<Key> keys;
        for (const auto& o : q.order_by) {
            Key k;
            k.desc = o.descending;
            for (std::size_t i = 0; i < q.items.size(); ++i) {
                const auto& item = q.items[i];
                const bool alias_hit = item.alias && o.expr.kind == ReturnExpr::Kind::Operand &&
                                       o.expr.operand.kind == Operand::Kind::Variable &&
                                       o.expr.operand.var == *item.alias;
                if (alias_hit || item.expr == o.expr) {
                    k.column = static_cast<int>(i);
                    break;
                }
            }
            if (k.column < 0) {
                if (aggregated)
                    throw ValidationError(
                        "ORDER BY expression must appear in RETURN when aggregating");
                if (q.distinct)
                    throw ValidationError(
                        "ORDER BY expression must appear in RETURN when DISTINCT is used");
                k.expr = &o.expr;
            }
            keys.push_back(k);
        }
        auto key_value = [&](const OutRow& row, const Key& k) -> std::optional<Scalar> {
            if (k.column >= 0) return row.cells[static_cast<std::size_t>(k.column)];
            return eval_operand(k.expr->operand, row.binding, graph);
        };
        std::stable_sort(rows.begin(), rows.end(), [&](const OutRow& a, const OutRow& b) {
            for (const auto& k : keys) {
                std::optional<Scalar> va = key_value(a, k), vb = key_value(b, k);
                if (!va && !vb) continue;
                if (!va) return false;    // nulls last
                if (!vb) return true;
                int c = order_compare(*va, *vb);
                if (c != 0) return k.desc ? c > 0 : c < 0;
            }
            if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
            return content_less(a.cells, b.cells);
        });
    }

    if (q.limit && static_cast<std::int64_t>(rows.size()) > *q.limit)
        rows.resize(static_cast<std::size_t>(*q.limit < 0 ? 0 : *q.limit));

    table.rows.reserve(rows.size());
    for (auto& row : rows) table.rows.push_back(std::move(row.cells));
    return table;
}

// ---- execute_create ----

inline CreateResult execute_create(const Query& q, PropertyGraph& graph, Provenance provenance) {
    if (!q.is_create()) throw ValidationError("execute_create() requires a CREATE query");
    validate(q);
    CreateResult result;
    std::map<std::string, NodeId> env;

    auto resolve_node = [&](const NodePattern& np) -> NodeId {
        if (np.var) {
            auto it = env.find(*np.var);
            if (it != env.end()) {
                if (!np.labels.empty() || !np.props.empty())
                    throw ValidationError("variable '" + *np.var + "' already bound in CREATE");
                return it->second;
            }
            if (np.labels.empty() && np.props.empty())
                throw ValidationError("unbound variable '" + *np.var + "' in CREATE");
        }
        std::set<std::string> labels(np.labels.begin(), np.labels.end());
        PropertyMap props;
        for (const auto& [k, v] : np.props) props[k] = v;
        NodeId id = graph.create_node(std::move(labels), std::move(props), provenance);
        result.nodes.push_back(id);
        if (np.var) env[*np.var] = id;
        return id;
    };

    for (const auto& path : q.creates) {
        std::vector<NodeId> ids;
        ids.reserve(path.nodes.size());
        for (const auto& np : path.nodes) ids.push_back(resolve_node(np));
        for (std::size_t i = 0; i < path.edges.size(); ++i) {
            const EdgePattern& ep = path.edges[i];
            NodeId src = ids[i], dst = ids[i + 1];
            if (ep.direction == Direction::In) std::swap(src, dst);
            PropertyMap props;
            for (const auto& [k, v] : ep.props) props[k] = v;
            result.edges.push_back(graph.create_edge(ep.types[0], src, dst, std::move(props)));
        }
    }
    return result;
}

} // namespace assetgraph::cypher
