#pragma once

// Recursive-descent parser. Every rejection carries a 1-based line:column and
// the expectation set at that point, in the error format the rest of the
// system pins down. Keywords are case-insensitive and reserved.

#include <charconv>
#include <set>
#include <string>
#include <vector>

#include "assetgraph/cypher/ast.hpp"
#include "assetgraph/cypher/lexer.hpp"

namespace assetgraph::cypher {

inline bool is_reserved(const std::string& upper) {
    static const std::set<std::string> kReserved = {
        "MATCH", "WHERE",    "RETURN", "DISTINCT", "ORDER", "BY",  "LIMIT",
        "CREATE", "AND",     "OR",     "NOT",      "CONTAINS", "STARTS", "WITH",
        "ASC",    "DESC",    "AS",     "TRUE",     "FALSE"};
    return kReserved.count(upper) > 0;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(lex(text)) {}

    Query parse_query() {
        Query q;
        if (accept_kw("CREATE")) {
            q.creates.push_back(parse_pattern());
            while (accept(Tok::Comma)) q.creates.push_back(parse_pattern());
            expect_end();
            return q;
        }
        if (!at_kw("MATCH")) fail({"'MATCH'", "'CREATE'"});
        while (accept_kw("MATCH")) {
            MatchClause clause;
            clause.patterns.push_back(parse_pattern());
            while (accept(Tok::Comma)) clause.patterns.push_back(parse_pattern());
            q.matches.push_back(std::move(clause));
        }
        if (accept_kw("WHERE")) q.where = parse_or();
        if (!at_kw("RETURN")) fail({"'MATCH'", "'WHERE'", "'RETURN'"});
        ++pos_;
        q.distinct = accept_kw("DISTINCT");
        q.items.push_back(parse_return_item());
        while (accept(Tok::Comma)) q.items.push_back(parse_return_item());
        if (accept_kw("ORDER")) {
            expect_kw("BY");
            q.order_by.push_back(parse_order_item());
            while (accept(Tok::Comma)) q.order_by.push_back(parse_order_item());
        }
        if (accept_kw("LIMIT")) q.limit = parse_integer("a limit count");
        expect_end();
        return q;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().upper() == kw; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }
    bool accept_kw(const char* kw) {
        if (!at_kw(kw)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::vector<std::string>& expected) const {
        std::string joined;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) joined += (i + 1 == expected.size()) ? " or " : ", ";
            joined += expected[i];
        }
        const Token& t = peek();
        throw ParseError(t.line, t.col, joined, describe(t));
    }

    Token expect(Tok k, const char* desc) {
        if (!at(k)) fail({desc});
        return tokens_[pos_++];
    }
    void expect_kw(const char* kw) {
        if (!at_kw(kw)) fail({"'" + std::string(kw) + "'"});
        ++pos_;
    }
    void expect_end() {
        if (!at(Tok::End)) fail({"end of input"});
    }

    std::string expect_name(const char* desc) {
        if (!at(Tok::Ident) || is_reserved(peek().upper())) fail({desc});
        return tokens_[pos_++].text;
    }

    std::int64_t parse_integer(const char* desc) {
        if (!at(Tok::Integer)) fail({desc});
        const Token& t = peek();
        std::int64_t value = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc()) fail({desc});
        ++pos_;
        return value;
    }

    Scalar parse_literal() {
        bool negative = false;
        if (at(Tok::Dash)) {
            if (peek(1).kind != Tok::Integer && peek(1).kind != Tok::Float)
                fail({"a literal value"});
            ++pos_;
            negative = true;
        }
        if (at(Tok::String)) return Scalar(tokens_[pos_++].text);
        if (at(Tok::Integer)) {
            std::int64_t v = parse_integer("a literal value");
            return Scalar(negative ? -v : v);
        }
        if (at(Tok::Float)) {
            const std::string& s = peek().text;
            double v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc()) fail({"a literal value"});
            ++pos_;
            return Scalar(negative ? -v : v);
        }
        if (accept_kw("TRUE")) return Scalar(true);
        if (accept_kw("FALSE")) return Scalar(false);
        fail({"a literal value"});
    }

    bool at_literal() const {
        switch (peek().kind) {
            case Tok::String:
            case Tok::Integer:
            case Tok::Float: return true;
            case Tok::Dash:
                return peek(1).kind == Tok::Integer || peek(1).kind == Tok::Float;
            case Tok::Ident: {
                std::string u = peek().upper();
                return u == "TRUE" || u == "FALSE";
            }
            default: return false;
        }
    }

    PropList parse_props() {
        expect(Tok::LBrace, "'{'");
        PropList props;
        if (accept(Tok::RBrace)) return props;
        while (true) {
            std::string key = expect_name("a property name");
            expect(Tok::Colon, "':'");
            props.emplace_back(std::move(key), parse_literal());
            if (accept(Tok::Comma)) continue;
            if (accept(Tok::RBrace)) break;
            fail({"','", "'}'"});
        }
        return props;
    }

    NodePattern parse_node() {
        expect(Tok::LParen, "'('");
        NodePattern node;
        if (at(Tok::Ident) && !is_reserved(peek().upper())) node.var = tokens_[pos_++].text;
        while (accept(Tok::Colon)) node.labels.push_back(expect_name("a label"));
        if (at(Tok::LBrace)) {
            node.props = parse_props();
            expect(Tok::RParen, "')'");
            return node;
        }
        if (!accept(Tok::RParen)) fail({"':'", "'{'", "')'"});
        return node;
    }

    // Returns false when the path cannot extend (no '-' or '<' ahead).
    bool parse_edge(EdgePattern& edge) {
        if (at(Tok::Lt)) {
            ++pos_;
            expect(Tok::Dash, "'-'");
            parse_edge_detail(edge);
            expect(Tok::Dash, "'-'");
            edge.direction = Direction::In;
            return true;
        }
        if (at(Tok::Dash)) {
            ++pos_;
            parse_edge_detail(edge);
            expect(Tok::Dash, "'-'");
            edge.direction = accept(Tok::Gt) ? Direction::Out : Direction::Both;
            return true;
        }
        return false;
    }

    void parse_edge_detail(EdgePattern& edge) {
        if (!at(Tok::LBracket)) return;
        ++pos_;
        if (at(Tok::Ident) && !is_reserved(peek().upper())) edge.var = tokens_[pos_++].text;
        if (accept(Tok::Colon)) edge.types.push_back(expect_name("a relationship type"));
        if (at(Tok::LBrace)) {
            edge.props = parse_props();
            expect(Tok::RBracket, "']'");
            return;
        }
        if (!accept(Tok::RBracket)) fail({"':'", "'{'", "']'"});
    }

    PathPattern parse_pattern() {
        PathPattern path;
        path.nodes.push_back(parse_node());
        EdgePattern edge;
        while (parse_edge(edge)) {
            path.edges.push_back(std::move(edge));
            path.nodes.push_back(parse_node());
            edge = EdgePattern{};
        }
        return path;
    }

    Operand parse_operand() {
        if (at_literal()) return Operand::make_literal(parse_literal());
        if (at(Tok::Ident) && !is_reserved(peek().upper())) {
            std::string var = tokens_[pos_++].text;
            if (accept(Tok::Dot))
                return Operand::make_property(std::move(var), expect_name("a property name"));
            return Operand::make_variable(std::move(var));
        }
        fail({"an expression"});
    }

    Cmp parse_cmp_op() {
        switch (peek().kind) {
            case Tok::Eq: ++pos_; return Cmp::Eq;
            case Tok::Ne: ++pos_; return Cmp::Ne;
            case Tok::Lt: ++pos_; return Cmp::Lt;
            case Tok::Le: ++pos_; return Cmp::Le;
            case Tok::Gt: ++pos_; return Cmp::Gt;
            case Tok::Ge: ++pos_; return Cmp::Ge;
            default: break;
        }
        if (accept_kw("CONTAINS")) return Cmp::Contains;
        if (accept_kw("STARTS")) {
            expect_kw("WITH");
            return Cmp::StartsWith;
        }
        fail({"a comparison operator"});
    }

    BoolExprPtr parse_or() {
        BoolExprPtr left = parse_and();
        while (accept_kw("OR"))
            left = BoolExpr::combine(BoolExpr::Kind::Or, std::move(left), parse_and());
        return left;
    }
    BoolExprPtr parse_and() {
        BoolExprPtr left = parse_not();
        while (accept_kw("AND"))
            left = BoolExpr::combine(BoolExpr::Kind::And, std::move(left), parse_not());
        return left;
    }
    BoolExprPtr parse_not() {
        if (accept_kw("NOT")) return BoolExpr::negate(parse_not());
        if (accept(Tok::LParen)) {
            BoolExprPtr inner = parse_or();
            expect(Tok::RParen, "')'");
            return inner;
        }
        Comparison cmp;
        cmp.lhs = parse_operand();
        cmp.op = parse_cmp_op();
        cmp.rhs = parse_operand();
        return BoolExpr::comparison(std::move(cmp));
    }

    static bool agg_from_name(const std::string& upper, AggFunc& out) {
        if (upper == "COUNT") out = AggFunc::Count;
        else if (upper == "SUM") out = AggFunc::Sum;
        else if (upper == "AVG") out = AggFunc::Avg;
        else if (upper == "MIN") out = AggFunc::Min;
        else if (upper == "MAX") out = AggFunc::Max;
        else return false;
        return true;
    }

    ReturnExpr parse_return_expr() {
        AggFunc func;
        if (at(Tok::Ident) && peek(1).kind == Tok::LParen && agg_from_name(peek().upper(), func)) {
            pos_ += 2;
            if (func == AggFunc::Count && accept(Tok::Star)) {
                expect(Tok::RParen, "')'");
                return ReturnExpr::make_count_star();
            }
            Operand arg = parse_operand();
            expect(Tok::RParen, "')'");
            return ReturnExpr::make_aggregate(func, std::move(arg));
        }
        return ReturnExpr::make_operand(parse_operand());
    }

    ReturnItem parse_return_item() {
        ReturnItem item;
        item.expr = parse_return_expr();
        if (accept_kw("AS")) item.alias = expect_name("an alias");
        return item;
    }

    OrderItem parse_order_item() {
        OrderItem item;
        item.expr = parse_return_expr();
        if (accept_kw("DESC"))
            item.descending = true;
        else
            accept_kw("ASC");
        return item;
    }
};

inline Query parse(const std::string& text) { return Parser(text).parse_query(); }

} // namespace assetgraph::cypher
