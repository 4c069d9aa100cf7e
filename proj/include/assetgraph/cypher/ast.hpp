#pragma once

// AST for the query subset: MATCH (multi-pattern, chained single-hop edges),
// WHERE comparisons under AND/OR/NOT, RETURN with aliases/DISTINCT/aggregates,
// ORDER BY, LIMIT, and CREATE. render() produces the canonical text form:
// uppercase keywords, single spaces, single-quoted strings. The canonical
// form re-parses to an equal AST.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "assetgraph/graph.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph::cypher {

// Exact structural equality; unlike Scalar::operator==, 1 and 1.0 differ.
inline bool literal_equal(const Scalar& a, const Scalar& b) {
    return a.kind() == b.kind() && a == b;
}

using PropList = std::vector<std::pair<std::string, Scalar>>;

inline bool props_equal(const PropList& a, const PropList& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || !literal_equal(a[i].second, b[i].second)) return false;
    return true;
}

// ---- expressions ----

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge, Contains, StartsWith };

struct Operand {
    enum class Kind { Literal, Variable, Property };
    Kind kind = Kind::Literal;
    Scalar literal;
    std::string var;
    std::string prop;

    static Operand make_literal(Scalar v) {
        Operand o;
        o.kind = Kind::Literal;
        o.literal = std::move(v);
        return o;
    }
    static Operand make_variable(std::string name) {
        Operand o;
        o.kind = Kind::Variable;
        o.var = std::move(name);
        return o;
    }
    static Operand make_property(std::string var, std::string prop) {
        Operand o;
        o.kind = Kind::Property;
        o.var = std::move(var);
        o.prop = std::move(prop);
        return o;
    }

    bool operator==(const Operand& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Literal: return literal_equal(literal, o.literal);
            case Kind::Variable: return var == o.var;
            case Kind::Property: return var == o.var && prop == o.prop;
        }
        return false;
    }
};

struct Comparison {
    Operand lhs;
    Cmp op = Cmp::Eq;
    Operand rhs;

    bool operator==(const Comparison& o) const {
        return op == o.op && lhs == o.lhs && rhs == o.rhs;
    }
};

struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    enum class Kind { Comparison, And, Or, Not };
    Kind kind = Kind::Comparison;
    Comparison cmp;     // Comparison
    BoolExprPtr lhs;    // And/Or left, Not child
    BoolExprPtr rhs;    // And/Or right

    static BoolExprPtr comparison(Comparison c) {
        auto e = std::make_shared<BoolExpr>();
        e->kind = Kind::Comparison;
        e->cmp = std::move(c);
        return e;
    }
    static BoolExprPtr combine(Kind k, BoolExprPtr l, BoolExprPtr r) {
        auto e = std::make_shared<BoolExpr>();
        e->kind = k;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }
    static BoolExprPtr negate(BoolExprPtr child) {
        auto e = std::make_shared<BoolExpr>();
        e->kind = Kind::Not;
        e->lhs = std::move(child);
        return e;
    }
};

inline bool bool_expr_equal(const BoolExprPtr& a, const BoolExprPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->kind == BoolExpr::Kind::Comparison) return a->cmp == b->cmp;
    return bool_expr_equal(a->lhs, b->lhs) && bool_expr_equal(a->rhs, b->rhs);
}

// ---- return clause ----

enum class AggFunc { Count, Sum, Avg, Min, Max };

struct ReturnExpr {
    enum class Kind { Operand, Aggregate, CountStar };
    Kind kind = Kind::Operand;
    Operand operand;    // Operand, or aggregate argument
    AggFunc func = AggFunc::Count;

    bool is_aggregate() const { return kind != Kind::Operand; }

    static ReturnExpr make_operand(Operand o) {
        ReturnExpr e;
        e.kind = Kind::Operand;
        e.operand = std::move(o);
        return e;
    }
    static ReturnExpr make_aggregate(AggFunc f, Operand arg) {
        ReturnExpr e;
        e.kind = Kind::Aggregate;
        e.func = f;
        e.operand = std::move(arg);
        return e;
    }
    static ReturnExpr make_count_star() {
        ReturnExpr e;
        e.kind = Kind::CountStar;
        return e;
    }

    bool operator==(const ReturnExpr& o) const {
        if (kind != o.kind) return false;
        if (kind == Kind::CountStar) return true;
        if (kind == Kind::Aggregate && func != o.func) return false;
        return operand == o.operand;
    }
};

struct ReturnItem {
    ReturnExpr expr;
    std::optional<std::string> alias;

    bool operator==(const ReturnItem& o) const { return expr == o.expr && alias == o.alias; }
};

struct OrderItem {
    ReturnExpr expr;
    bool descending = false;

    bool operator==(const OrderItem& o) const {
        return expr == o.expr && descending == o.descending;
    }
};

// ---- patterns ----

struct NodePattern {
    std::optional<std::string> var;
    std::vector<std::string> labels;
    PropList props;

    bool operator==(const NodePattern& o) const {
        return var == o.var && labels == o.labels && props_equal(props, o.props);
    }
};

struct EdgePattern {
    std::optional<std::string> var;
    std::vector<std::string> types;    // at most one
    Direction direction = Direction::Both;
    PropList props;

    bool operator==(const EdgePattern& o) const {
        return var == o.var && types == o.types && direction == o.direction &&
               props_equal(props, o.props);
    }
};

struct PathPattern {
    std::vector<NodePattern> nodes;    // nodes.size() == edges.size() + 1
    std::vector<EdgePattern> edges;

    bool operator==(const PathPattern& o) const { return nodes == o.nodes && edges == o.edges; }
};

struct MatchClause {
    std::vector<PathPattern> patterns;

    bool operator==(const MatchClause& o) const { return patterns == o.patterns; }
};

// ---- query ----

struct Query {
    std::vector<MatchClause> matches;
    BoolExprPtr where;
    bool distinct = false;
    std::vector<ReturnItem> items;
    std::vector<OrderItem> order_by;
    std::optional<std::int64_t> limit;
    std::vector<PathPattern> creates;

    bool is_create() const { return !creates.empty(); }

    bool operator==(const Query& o) const {
        return matches == o.matches && bool_expr_equal(where, o.where) &&
               distinct == o.distinct && items == o.items && order_by == o.order_by &&
               limit == o.limit && creates == o.creates;
    }
};

// ---- canonical rendering ----

inline std::string render_literal(const Scalar& v) {
    if (v.is_text()) {
        std::string out = "'";
        for (char c : v.text()) {
            switch (c) {
                case '\'': out += "\\'"; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        out += "'";
        return out;
    }
    return v.render();
}

inline std::string render(const Operand& o) {
    switch (o.kind) {
        case Operand::Kind::Literal: return render_literal(o.literal);
        case Operand::Kind::Variable: return o.var;
        case Operand::Kind::Property: return o.var + "." + o.prop;
    }
    return {};
}

inline const char* render(Cmp op) {
    switch (op) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "<>";
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
        case Cmp::Contains: return "CONTAINS";
        case Cmp::StartsWith: return "STARTS WITH";
    }
    return "=";
}

// Precedence: OR(1) < AND(2) < NOT(3) < comparison(4). Parentheses appear
// only where a child binds looser than its context.
inline std::string render_bool(const BoolExprPtr& e) {
    auto prec = [](const BoolExpr& x) {
        switch (x.kind) {
            case BoolExpr::Kind::Or: return 1;
            case BoolExpr::Kind::And: return 2;
            case BoolExpr::Kind::Not: return 3;
            case BoolExpr::Kind::Comparison: return 4;
        }
        return 4;
    };
    std::function<std::string(const BoolExprPtr&, int)> go =
        [&](const BoolExprPtr& node, int parent_prec) -> std::string {
        std::string out;
        int p = prec(*node);
        switch (node->kind) {
            case BoolExpr::Kind::Comparison:
                out = render(node->cmp.lhs);
                out += " ";
                out += render(node->cmp.op);
                out += " ";
                out += render(node->cmp.rhs);
                break;
            case BoolExpr::Kind::And:
                out = go(node->lhs, p) + " AND " + go(node->rhs, p + 1);
                break;
            case BoolExpr::Kind::Or:
                out = go(node->lhs, p) + " OR " + go(node->rhs, p + 1);
                break;
            case BoolExpr::Kind::Not:
                out = "NOT " + go(node->lhs, p);
                break;
        }
        if (p < parent_prec) out = "(" + out + ")";
        return out;
    };
    return go(e, 0);
}

inline const char* render(AggFunc f) {
    switch (f) {
        case AggFunc::Count: return "count";
        case AggFunc::Sum: return "sum";
        case AggFunc::Avg: return "avg";
        case AggFunc::Min: return "min";
        case AggFunc::Max: return "max";
    }
    return "count";
}

inline std::string render(const ReturnExpr& e) {
    switch (e.kind) {
        case ReturnExpr::Kind::Operand: return render(e.operand);
        case ReturnExpr::Kind::CountStar: return "count(*)";
        case ReturnExpr::Kind::Aggregate:
            return std::string(render(e.func)) + "(" + render(e.operand) + ")";
    }
    return {};
}

inline std::string render_props(const PropList& props) {
    std::string out = "{";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += props[i].first + ": " + render_literal(props[i].second);
    }
    return out + "}";
}

inline std::string render(const NodePattern& n) {
    std::string out = "(";
    if (n.var) out += *n.var;
    for (const auto& l : n.labels) out += ":" + l;
    if (!n.props.empty()) {
        if (out.size() > 1) out += " ";
        out += render_props(n.props);
    }
    return out + ")";
}

inline std::string render(const EdgePattern& e) {
    std::string detail;
    if (e.var) detail += *e.var;
    for (const auto& t : e.types) detail += ":" + t;
    if (!e.props.empty()) {
        if (!detail.empty()) detail += " ";
        detail += render_props(e.props);
    }
    std::string mid = detail.empty() ? "-" : "-[" + detail + "]-";
    switch (e.direction) {
        case Direction::Out: return detail.empty() ? "-->" : mid + ">";
        case Direction::In: return detail.empty() ? "<--" : "<" + mid;
        case Direction::Both: return detail.empty() ? "--" : mid;
    }
    return mid;
}

inline std::string render(const PathPattern& p) {
    std::string out = render(p.nodes[0]);
    for (std::size_t i = 0; i < p.edges.size(); ++i)
        out += render(p.edges[i]) + render(p.nodes[i + 1]);
    return out;
}

inline std::string render(const Query& q) {
    std::ostringstream out;
    if (q.is_create()) {
        out << "CREATE ";
        for (std::size_t i = 0; i < q.creates.size(); ++i) {
            if (i) out << ", ";
            out << render(q.creates[i]);
        }
        return out.str();
    }
    for (const auto& clause : q.matches) {
        out << "MATCH ";
        for (std::size_t i = 0; i < clause.patterns.size(); ++i) {
            if (i) out << ", ";
            out << render(clause.patterns[i]);
        }
        out << " ";
    }
    if (q.where) out << "WHERE " << render_bool(q.where) << " ";
    out << "RETURN ";
    if (q.distinct) out << "DISTINCT ";
    for (std::size_t i = 0; i < q.items.size(); ++i) {
        if (i) out << ", ";
        out << render(q.items[i].expr);
        if (q.items[i].alias) out << " AS " << *q.items[i].alias;
    }
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
        out << (i == 0 ? " ORDER BY " : ", ");
        out << render(q.order_by[i].expr);
        if (q.order_by[i].descending) out << " DESC";
    }
    if (q.limit) out << " LIMIT " << *q.limit;
    return out.str();
}

} // namespace assetgraph::cypher
