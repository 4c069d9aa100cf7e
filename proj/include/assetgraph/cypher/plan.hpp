#pragma once

// Pattern-access planning. Each MATCH clause becomes a sequence of seed and
// expand operations: a seed binds a variable from an index seek, a label scan,
// a full scan, or a binding carried over from an earlier clause; an expand
// walks one pattern edge from a bound variable. Seeds prefer the cheapest
// access path by estimated candidate count, so a two-pattern join starts from
// the cheaper side. The plan is inspectable; the scoring harness reads it.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "assetgraph/cypher/ast.hpp"
#include "assetgraph/graph.hpp"

namespace assetgraph::cypher {

struct VarConstraints {
    std::vector<std::string> labels;
    PropList props;
};

struct EdgeOcc {
    std::optional<std::string> var;
    std::vector<std::string> types;
    Direction direction = Direction::Both;    // as written, relative to left
    PropList props;
    std::string left;
    std::string right;
};

struct SeedStep {
    enum class Kind { IndexSeek, LabelScan, AllNodesScan, BoundRef };
    Kind kind = Kind::AllNodesScan;
    std::string var;
    std::string label;
    std::string prop;
    Scalar value;
};

struct ExpandStep {
    std::size_t edge_index = 0;
    std::string from_var;
    std::string to_var;
    bool from_is_left = true;
};

struct ClauseOp {
    enum class Kind { Seed, Expand };
    Kind kind = Kind::Seed;
    SeedStep seed;
    ExpandStep expand;
};

struct ClausePlan {
    std::map<std::string, VarConstraints> node_vars;
    std::vector<std::string> var_order;    // first-occurrence order
    std::vector<EdgeOcc> edges;
    std::vector<ClauseOp> ops;
};

struct Plan {
    std::vector<ClausePlan> clauses;
    bool uses_index_seek = false;
    bool has_filter = false;
    bool aggregated = false;
    bool distinct = false;
    std::vector<std::string> projections;
    std::vector<std::string> order_keys;
    std::optional<std::int64_t> limit;

    std::string render() const;
};

struct PlannerOptions {
    bool use_indices = true;
};

// var.prop = literal pairs reachable from the top-level AND chain of WHERE.
inline void collect_equalities(const BoolExprPtr& e,
                               std::vector<std::tuple<std::string, std::string, Scalar>>& out) {
    if (!e) return;
    if (e->kind == BoolExpr::Kind::And) {
        collect_equalities(e->lhs, out);
        collect_equalities(e->rhs, out);
        return;
    }
    if (e->kind != BoolExpr::Kind::Comparison || e->cmp.op != Cmp::Eq) return;
    const Operand& l = e->cmp.lhs;
    const Operand& r = e->cmp.rhs;
    if (l.kind == Operand::Kind::Property && r.kind == Operand::Kind::Literal)
        out.emplace_back(l.var, l.prop, r.literal);
    else if (r.kind == Operand::Kind::Property && l.kind == Operand::Kind::Literal)
        out.emplace_back(r.var, r.prop, l.literal);
}

namespace plan_detail {

inline void add_node_occurrence(ClausePlan& cp, const NodePattern& np, std::size_t& anon_counter,
                                std::vector<std::string>& names_out) {
    std::string name = np.var ? *np.var : "$" + std::to_string(anon_counter++);
    auto [it, inserted] = cp.node_vars.try_emplace(name);
    if (inserted) cp.var_order.push_back(name);
    for (const auto& l : np.labels) it->second.labels.push_back(l);
    for (const auto& p : np.props) it->second.props.push_back(p);
    names_out.push_back(std::move(name));
}

} // namespace plan_detail

inline Plan plan(const Query& q, const PropertyGraph& graph, const PlannerOptions& opts = {}) {
    Plan out;
    std::size_t anon_counter = 0;
    std::vector<std::tuple<std::string, std::string, Scalar>> equalities;
    collect_equalities(q.where, equalities);

    std::set<std::string> bound;    // vars bound by earlier clauses
    for (const auto& clause : q.matches) {
        ClausePlan cp;
        for (const auto& path : clause.patterns) {
            std::vector<std::string> names;
            for (const auto& np : path.nodes)
                plan_detail::add_node_occurrence(cp, np, anon_counter, names);
            for (std::size_t i = 0; i < path.edges.size(); ++i) {
                EdgeOcc occ;
                occ.var = path.edges[i].var;
                occ.types = path.edges[i].types;
                occ.direction = path.edges[i].direction;
                occ.props = path.edges[i].props;
                occ.left = names[i];
                occ.right = names[i + 1];
                cp.edges.push_back(std::move(occ));
            }
        }

        // Best seed per variable.
        auto seed_for = [&](const std::string& var) -> std::pair<SeedStep, double> {
            const VarConstraints& vc = cp.node_vars.at(var);
            SeedStep seed;
            seed.var = var;
            if (bound.count(var)) {
                seed.kind = SeedStep::Kind::BoundRef;
                return {seed, -1.0};
            }
            double best = static_cast<double>(graph.nodes().size());
            seed.kind = SeedStep::Kind::AllNodesScan;
            if (!opts.use_indices || vc.labels.empty()) return {seed, best};
            // ties go to the more selective access path: a label scan is never
            // worse than a full scan of equal estimate, and an equality seek is
            // never worse than either
            for (const auto& label : vc.labels) {
                double est = static_cast<double>(graph.nodes_by_label(label).size());
                if (est <= best) {
                    best = est;
                    seed.kind = SeedStep::Kind::LabelScan;
                    seed.label = label;
                }
            }
            std::vector<std::pair<std::string, Scalar>> eqs(vc.props.begin(), vc.props.end());
            for (const auto& [v, p, val] : equalities)
                if (v == var) eqs.emplace_back(p, val);
            for (const auto& label : vc.labels) {
                for (const auto& [prop, value] : eqs) {
                    double est =
                        static_cast<double>(graph.nodes_by_property(label, prop, value).size());
                    if (est <= best) {
                        best = est;
                        seed.kind = SeedStep::Kind::IndexSeek;
                        seed.label = label;
                        seed.prop = prop;
                        seed.value = value;
                    }
                }
            }
            return {seed, best};
        };

        std::set<std::string> scheduled;
        std::vector<bool> edge_done(cp.edges.size(), false);
        auto close_edges = [&]() {
            for (std::size_t i = 0; i < cp.edges.size(); ++i) {
                if (edge_done[i]) continue;
                if (scheduled.count(cp.edges[i].left) && scheduled.count(cp.edges[i].right)) {
                    ClauseOp op;
                    op.kind = ClauseOp::Kind::Expand;
                    op.expand = {i, cp.edges[i].left, cp.edges[i].right, true};
                    cp.ops.push_back(op);
                    edge_done[i] = true;
                }
            }
        };

        while (scheduled.size() < cp.node_vars.size()) {
            bool expanded = false;
            for (std::size_t i = 0; i < cp.edges.size() && !expanded; ++i) {
                if (edge_done[i]) continue;
                const bool l = scheduled.count(cp.edges[i].left) > 0;
                const bool r = scheduled.count(cp.edges[i].right) > 0;
                if (l == r) continue;
                ClauseOp op;
                op.kind = ClauseOp::Kind::Expand;
                op.expand.edge_index = i;
                op.expand.from_is_left = l;
                op.expand.from_var = l ? cp.edges[i].left : cp.edges[i].right;
                op.expand.to_var = l ? cp.edges[i].right : cp.edges[i].left;
                cp.ops.push_back(op);
                edge_done[i] = true;
                scheduled.insert(op.expand.to_var);
                expanded = true;
            }
            if (expanded) {
                close_edges();
                continue;
            }
            std::string best_var;
            SeedStep best_seed;
            double best_cost = std::numeric_limits<double>::infinity();
            for (const auto& var : cp.var_order) {
                if (scheduled.count(var)) continue;
                auto [seed, cost] = seed_for(var);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_var = var;
                    best_seed = seed;
                }
            }
            ClauseOp op;
            op.kind = ClauseOp::Kind::Seed;
            op.seed = best_seed;
            cp.ops.push_back(op);
            scheduled.insert(best_var);
            if (best_seed.kind == SeedStep::Kind::IndexSeek) out.uses_index_seek = true;
            close_edges();
        }
        for (const auto& var : cp.var_order) bound.insert(var);
        out.clauses.push_back(std::move(cp));
    }

    out.has_filter = q.where != nullptr;
    out.distinct = q.distinct;
    for (const auto& item : q.items) {
        if (item.expr.is_aggregate()) out.aggregated = true;
        out.projections.push_back(item.alias ? *item.alias + "=" + render(item.expr)
                                             : render(item.expr));
    }
    for (const auto& o : q.order_by)
        out.order_keys.push_back(render(o.expr) + (o.descending ? " DESC" : ""));
    out.limit = q.limit;
    return out;
}

inline std::string render_edge_occ(const EdgeOcc& occ, bool from_is_left) {
    std::string detail;
    if (occ.var) detail += *occ.var;
    if (!occ.types.empty()) detail += ":" + occ.types[0];
    std::string core = detail.empty() ? "" : "[" + detail + "]";
    Direction dir = occ.direction;
    if (!from_is_left) {
        if (dir == Direction::Out) dir = Direction::In;
        else if (dir == Direction::In) dir = Direction::Out;
    }
    switch (dir) {
        case Direction::Out: return "-" + core + "->";
        case Direction::In: return "<-" + core + "-";
        case Direction::Both: return "-" + core + "-";
    }
    return "-" + core + "-";
}

inline std::string Plan::render() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        out << "clause " << c << ":\n";
        for (const auto& op : clauses[c].ops) {
            if (op.kind == ClauseOp::Kind::Seed) {
                const SeedStep& s = op.seed;
                switch (s.kind) {
                    case SeedStep::Kind::IndexSeek:
                        out << "  index seek " << s.var << ":" << s.label << "(" << s.prop << "="
                            << render_literal(s.value) << ")\n";
                        break;
                    case SeedStep::Kind::LabelScan:
                        out << "  label scan " << s.var << ":" << s.label << "\n";
                        break;
                    case SeedStep::Kind::AllNodesScan:
                        out << "  all nodes scan " << s.var << "\n";
                        break;
                    case SeedStep::Kind::BoundRef:
                        out << "  bound ref " << s.var << "\n";
                        break;
                }
            } else {
                const ExpandStep& e = op.expand;
                out << "  expand (" << e.from_var << ")"
                    << render_edge_occ(clauses[c].edges[e.edge_index], e.from_is_left) << "("
                    << e.to_var << ")\n";
            }
        }
    }
    if (has_filter) out << "filter\n";
    out << (aggregated ? "aggregate" : "project");
    for (std::size_t i = 0; i < projections.size(); ++i) out << (i ? ", " : " ") << projections[i];
    out << "\n";
    if (distinct) out << "distinct\n";
    if (!order_keys.empty()) {
        out << "order by";
        for (std::size_t i = 0; i < order_keys.size(); ++i) out << (i ? ", " : " ") << order_keys[i];
        out << "\n";
    }
    if (limit) out << "limit " << *limit << "\n";
    return out.str();
}

} // namespace assetgraph::cypher
