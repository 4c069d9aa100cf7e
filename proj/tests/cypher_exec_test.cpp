#include <gtest/gtest.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "assetgraph/cypher/executor.hpp"
#include "assetgraph/cypher/parser.hpp"
#include "assetgraph/cypher/plan.hpp"
#include "assetgraph/graph.hpp"
#include "cypher_oracle.hpp"

using assetgraph::PropertyGraph;
using assetgraph::PropertyMap;
using assetgraph::Provenance;
using assetgraph::Scalar;
using assetgraph::Timestamp;
using assetgraph::ValidationError;
namespace cy = assetgraph::cypher;

namespace {

cy::ResultTable run(const PropertyGraph& g, const std::string& text, bool indices = true) {
    return cy::execute(cy::parse(text), g, {indices});
}

std::string cell_repr(const std::optional<Scalar>& c) {
    if (!c) return "~";
    switch (c->kind()) {
        case Scalar::Kind::Text: return "t:" + c->text();
        case Scalar::Kind::Integer: return "i:" + std::to_string(c->integer());
        case Scalar::Kind::Float: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "f:%.17g", c->floating());
            return buf;
        }
        case Scalar::Kind::Boolean: return c->boolean() ? "b:true" : "b:false";
        case Scalar::Kind::Time: return "s:" + std::to_string(c->time().epoch_seconds);
    }
    return "?";
}

std::string row_repr(const std::vector<std::optional<Scalar>>& row) {
    std::string s;
    for (const auto& c : row) {
        s += cell_repr(c);
        s += "|";
    }
    return s;
}

std::vector<std::string> sorted_reprs(const std::vector<std::vector<std::optional<Scalar>>>& rows) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(row_repr(r));
    std::sort(out.begin(), out.end());
    return out;
}

template <typename F>
std::string validation_message(F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

// Equipment CWC04009 with three 2019 events, one 2018 event, and one 2019
// event on a different asset.
PropertyGraph chiller_fixture() {
    PropertyGraph g;
    g.create_node({"Equipment"}, {{"equipment_id", Scalar("CWC04009")}, {"name", Scalar("Chiller 6")}});
    auto event = [&](const char* eq, std::int64_t year, const char* kind) {
        g.create_node({"Event"}, {{"equipment_id", Scalar(eq)},
                                  {"year", Scalar(year)},
                                  {"kind", Scalar(kind)}});
    };
    event("CWC04009", 2019, "failure");
    event("CWC04009", 2019, "alert");
    event("CWC04009", 2019, "work_order");
    event("CWC04009", 2018, "failure");
    event("CWC04011", 2019, "failure");
    return g;
}

}    // namespace

TEST(Exec, CountOnChillerFixture) {
    PropertyGraph g = chiller_fixture();
    auto t = run(g,
                 "MATCH (e:Event) WHERE e.equipment_id = 'CWC04009' AND e.year = 2019 "
                 "RETURN count(e)");
    ASSERT_EQ(t.rows.size(), 1u);
    ASSERT_TRUE(t.rows[0][0].has_value());
    EXPECT_EQ(t.rows[0][0]->integer(), 3);
}

TEST(Exec, MonitorsProjectionOrdered) {
    PropertyGraph g;
    auto eq = g.create_node({"Equipment"}, {{"equipment_id", Scalar("CWC04009")}});
    auto s1 = g.create_node({"Sensor"}, {{"sensor_id", Scalar("SUPTEMP_CWC04009")}});
    auto s2 = g.create_node({"Sensor"}, {{"sensor_id", Scalar("FLOW_CWC04009")}});
    auto s3 = g.create_node({"Sensor"}, {{"sensor_id", Scalar("FLOW_CWC04011")}});
    g.create_edge("MONITORS", s1, eq);
    g.create_edge("MONITORS", s2, eq);
    auto other = g.create_node({"Equipment"}, {{"equipment_id", Scalar("CWC04011")}});
    g.create_edge("MONITORS", s3, other);
    auto t = run(g,
                 "MATCH (s:Sensor)-[:MONITORS]->(eq:Equipment) "
                 "WHERE eq.equipment_id = 'CWC04009' "
                 "RETURN s.sensor_id ORDER BY s.sensor_id");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0]->text(), "FLOW_CWC04009");
    EXPECT_EQ(t.rows[1][0]->text(), "SUPTEMP_CWC04009");
}

TEST(Exec, EmptyGraphPreservesHeader) {
    PropertyGraph g;
    auto t = run(g, "MATCH (n:Nope) RETURN n.a, n.b AS second");
    EXPECT_TRUE(t.rows.empty());
    ASSERT_EQ(t.columns.size(), 2u);
    EXPECT_EQ(t.columns[0], "n.a");
    EXPECT_EQ(t.columns[1], "second");
}

TEST(Exec, AggregatesOverEmptyInput) {
    PropertyGraph g;
    auto t = run(g, "MATCH (e:Event) RETURN count(e), count(*), sum(e.p), avg(e.p), min(e.p), max(e.p)");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->integer(), 0);
    EXPECT_EQ(t.rows[0][1]->integer(), 0);
    ASSERT_TRUE(t.rows[0][2].has_value());
    EXPECT_EQ(t.rows[0][2]->kind(), Scalar::Kind::Integer);
    EXPECT_EQ(t.rows[0][2]->integer(), 0);
    EXPECT_FALSE(t.rows[0][3].has_value());
    EXPECT_FALSE(t.rows[0][4].has_value());
    EXPECT_FALSE(t.rows[0][5].has_value());
}

TEST(Exec, GroupedAggregateOverEmptyInputYieldsNoRows) {
    PropertyGraph g;
    auto t = run(g, "MATCH (e:Event) RETURN e.kind, count(e)");
    EXPECT_TRUE(t.rows.empty());
}

TEST(Exec, NullAndMismatchedComparisons) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(1))}});
    g.create_node({"N"}, {});    // p missing
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.missing = 1 RETURN n").rows.size(), 0u);
    // two-valued logic: NOT over a null comparison is true
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE NOT n.missing = 1 RETURN n").rows.size(), 2u);
    // text vs integer comparison is false, as is CONTAINS on a non-text value
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.p = 'one' RETURN n").rows.size(), 0u);
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.p CONTAINS '1' RETURN n").rows.size(), 0u);
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.p <> 'one' RETURN n").rows.size(), 0u);
}

TEST(Exec, CrossKindNumericEquality) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(5))}});
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.p = 5.0 RETURN n").rows.size(), 1u);
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.p < 5.5 RETURN n").rows.size(), 1u);
}

TEST(Exec, DistinctCollapsesNumericKinds) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(5))}});
    g.create_node({"N"}, {{"p", Scalar(5.0)}});
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(7))}});
    auto t = run(g, "MATCH (n:N) RETURN DISTINCT n.p ORDER BY n.p");
    ASSERT_EQ(t.rows.size(), 2u);
    // the first-seen representative of 5/5.0 is the integer
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Integer);
    EXPECT_EQ(t.rows[0][0]->integer(), 5);
    EXPECT_EQ(t.rows[1][0]->integer(), 7);
}

TEST(Exec, OrderByNullsLastBothDirections) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(2))}});
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(1))}});
    g.create_node({"N"}, {});
    auto asc = run(g, "MATCH (n:N) RETURN n.p ORDER BY n.p");
    ASSERT_EQ(asc.rows.size(), 3u);
    EXPECT_EQ(asc.rows[0][0]->integer(), 1);
    EXPECT_EQ(asc.rows[1][0]->integer(), 2);
    EXPECT_FALSE(asc.rows[2][0].has_value());
    auto desc = run(g, "MATCH (n:N) RETURN n.p ORDER BY n.p DESC");
    ASSERT_EQ(desc.rows.size(), 3u);
    EXPECT_EQ(desc.rows[0][0]->integer(), 2);
    EXPECT_EQ(desc.rows[1][0]->integer(), 1);
    EXPECT_FALSE(desc.rows[2][0].has_value());
}

TEST(Exec, OrderByMixedKindsRanked) {
    PropertyGraph g;
    g.create_node({"K"}, {{"v", Scalar(true)}});
    g.create_node({"K"}, {{"v", Scalar(Timestamp{86400})}});
    g.create_node({"K"}, {{"v", Scalar("x")}});
    g.create_node({"K"}, {{"v", Scalar(std::int64_t(3))}});
    g.create_node({"K"}, {});
    auto t = run(g, "MATCH (n:K) RETURN n.v ORDER BY n.v");
    ASSERT_EQ(t.rows.size(), 5u);
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Text);
    EXPECT_EQ(t.rows[1][0]->kind(), Scalar::Kind::Integer);
    EXPECT_EQ(t.rows[2][0]->kind(), Scalar::Kind::Boolean);
    EXPECT_EQ(t.rows[3][0]->kind(), Scalar::Kind::Time);
    EXPECT_FALSE(t.rows[4][0].has_value());
    auto d = run(g, "MATCH (n:K) RETURN n.v ORDER BY n.v DESC");
    EXPECT_EQ(d.rows[0][0]->kind(), Scalar::Kind::Time);
    EXPECT_EQ(d.rows[3][0]->kind(), Scalar::Kind::Text);
    EXPECT_FALSE(d.rows[4][0].has_value());
}

TEST(Exec, UndirectedSelfLoopMatchesOnce) {
    PropertyGraph g;
    auto a = g.create_node({"N"}, {{"k", Scalar("a")}});
    g.create_edge("R", a, a);
    EXPECT_EQ(run(g, "MATCH (x:N)-[r:R]-(y:N) RETURN x, y").rows.size(), 1u);
    EXPECT_EQ(run(g, "MATCH (x:N)-[r:R]-(x) RETURN x").rows.size(), 1u);
    EXPECT_EQ(run(g, "MATCH (x:N)-[r:R]->(x) RETURN x").rows.size(), 1u);
}

TEST(Exec, RelationshipUniquenessWithinClause) {
    PropertyGraph g;
    auto a = g.create_node({"N"}, {{"k", Scalar("a")}});
    auto b = g.create_node({"N"}, {{"k", Scalar("b")}});
    g.create_edge("R", a, b);
    // a single undirected edge cannot serve both hops of a two-hop path
    EXPECT_EQ(run(g, "MATCH (x:N)-[:R]-(y:N)-[:R]-(z:N) RETURN x, y, z").rows.size(), 0u);
    g.create_edge("R", b, a);
    // with a second edge the round trip works from both ends
    EXPECT_EQ(run(g, "MATCH (x:N)-[:R]->(y:N)-[:R]->(x) RETURN x").rows.size(), 2u);
}

TEST(Exec, EdgeDistinctnessResetsAcrossClauses) {
    PropertyGraph g;
    auto a = g.create_node({"N"}, {});
    auto b = g.create_node({"N"}, {});
    g.create_edge("R", a, b);
    auto t = run(g, "MATCH (x)-[:R]->(y) MATCH (u)-[:R]->(v) RETURN x, y, u, v");
    EXPECT_EQ(t.rows.size(), 1u);
}

TEST(Exec, EntityVariableProjectsExternalId) {
    PropertyGraph g;
    auto id = g.create_node({"N"}, {});
    auto t = run(g, "MATCH (n:N) RETURN n");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Text);
    EXPECT_EQ(t.rows[0][0]->text(), std::to_string(id));
}

TEST(Exec, UnknownPropertyYieldsNullCell) {
    PropertyGraph g;
    g.create_node({"N"}, {});
    auto t = run(g, "MATCH (n:N) RETURN n.nope");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_FALSE(t.rows[0][0].has_value());
}

TEST(Exec, EdgePropertyInWhereAndReturn) {
    PropertyGraph g;
    auto a = g.create_node({"N"}, {});
    auto b = g.create_node({"N"}, {});
    g.create_edge("R", a, b, {{"w", Scalar(std::int64_t(3))}});
    g.create_edge("R", a, b, {{"w", Scalar(std::int64_t(1))}});
    auto t = run(g, "MATCH (a)-[r:R]->(b) WHERE r.w > 2 RETURN r.w");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->integer(), 3);
}

TEST(Exec, LimitZeroAndTruncation) {
    PropertyGraph g;
    for (int i = 0; i < 5; ++i) g.create_node({"N"}, {{"p", Scalar(std::int64_t(i))}});
    EXPECT_EQ(run(g, "MATCH (n:N) RETURN n LIMIT 0").rows.size(), 0u);
    EXPECT_EQ(run(g, "MATCH (n:N) RETURN n LIMIT 3").rows.size(), 3u);
    auto t = run(g, "MATCH (n:N) RETURN n.p ORDER BY n.p DESC LIMIT 2");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0]->integer(), 4);
    EXPECT_EQ(t.rows[1][0]->integer(), 3);
}

TEST(Exec, ImplicitGroupingByMultipleKeys) {
    PropertyGraph g;
    auto event = [&](const char* kind, std::int64_t year) {
        g.create_node({"Event"}, {{"kind", Scalar(kind)}, {"year", Scalar(year)}});
    };
    event("failure", 2019);
    event("failure", 2019);
    event("alert", 2019);
    event("failure", 2020);
    auto t = run(g, "MATCH (e:Event) RETURN e.kind, e.year, count(*) ORDER BY e.kind, e.year");
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0][0]->text(), "alert");
    EXPECT_EQ(t.rows[0][2]->integer(), 1);
    EXPECT_EQ(t.rows[1][0]->text(), "failure");
    EXPECT_EQ(t.rows[1][1]->integer(), 2019);
    EXPECT_EQ(t.rows[1][2]->integer(), 2);
    EXPECT_EQ(t.rows[2][1]->integer(), 2020);
    EXPECT_EQ(t.rows[2][2]->integer(), 1);
}

TEST(Exec, SumMixedIntFloatBecomesFloat) {
    PropertyGraph g;
    g.create_node({"N"}, {{"v", Scalar(std::int64_t(1))}});
    g.create_node({"N"}, {{"v", Scalar(0.5)}});
    auto t = run(g, "MATCH (n:N) RETURN sum(n.v)");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Float);
    EXPECT_DOUBLE_EQ(t.rows[0][0]->floating(), 1.5);
}

TEST(Exec, AvgOfIntegers) {
    PropertyGraph g;
    for (std::int64_t v : {1, 2, 4}) g.create_node({"N"}, {{"v", Scalar(v)}});
    auto t = run(g, "MATCH (n:N) RETURN avg(n.v)");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Float);
    EXPECT_DOUBLE_EQ(t.rows[0][0]->floating(), 7.0 / 3.0);
}

TEST(Exec, MinMaxMixedKindsFollowIndexOrder) {
    PropertyGraph g;
    g.create_node({"N"}, {{"v", Scalar("x")}});
    g.create_node({"N"}, {{"v", Scalar(std::int64_t(3))}});
    auto t = run(g, "MATCH (n:N) RETURN min(n.v), max(n.v)");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->kind(), Scalar::Kind::Text);
    EXPECT_EQ(t.rows[0][0]->text(), "x");
    EXPECT_EQ(t.rows[0][1]->kind(), Scalar::Kind::Integer);
    EXPECT_EQ(t.rows[0][1]->integer(), 3);
}

TEST(Exec, CountStarVersusCountProperty) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(1))}});
    g.create_node({"N"}, {});
    auto t = run(g, "MATCH (n:N) RETURN count(*), count(n.p), count(n)");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->integer(), 2);
    EXPECT_EQ(t.rows[0][1]->integer(), 1);
    EXPECT_EQ(t.rows[0][2]->integer(), 2);
}

TEST(Exec, StartsWithAndContains) {
    PropertyGraph g;
    g.create_node({"N"}, {{"q", Scalar("uplink")}});
    g.create_node({"N"}, {{"q", Scalar("downlink")}});
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.q STARTS WITH 'up' RETURN n").rows.size(), 1u);
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.q CONTAINS 'link' RETURN n").rows.size(), 2u);
    EXPECT_EQ(run(g, "MATCH (n:N) WHERE n.q CONTAINS 'LINK' RETURN n").rows.size(), 0u);
}

TEST(Exec, TwoClauseCrossProduct) {
    PropertyGraph g;
    g.create_node({"X"}, {});
    g.create_node({"X"}, {});
    for (int i = 0; i < 3; ++i) g.create_node({"Y"}, {});
    EXPECT_EQ(run(g, "MATCH (a:X) MATCH (b:Y) RETURN a, b").rows.size(), 6u);
}

TEST(Exec, JoinViaSharedVariableAcrossClauses) {
    PropertyGraph g;
    auto n1 = g.create_node({"N"}, {{"k", Scalar(std::int64_t(1))}});
    auto n2 = g.create_node({"N"}, {{"k", Scalar(std::int64_t(2))}});
    auto n3 = g.create_node({"N"}, {{"k", Scalar(std::int64_t(3))}});
    g.create_edge("R", n1, n2);
    g.create_edge("R", n2, n3);
    auto t = run(g, "MATCH (a:N)-[:R]->(b:N) MATCH (b)-[:R]->(c:N) RETURN a.k, b.k, c.k");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0]->integer(), 1);
    EXPECT_EQ(t.rows[0][1]->integer(), 2);
    EXPECT_EQ(t.rows[0][2]->integer(), 3);
}

// ---- planner shape ----

TEST(Plan, InlinePropertySeedUsesIndexSeek) {
    PropertyGraph g = chiller_fixture();
    auto p = cy::plan(cy::parse("MATCH (e:Equipment {equipment_id: 'CWC04009'}) RETURN e"), g);
    EXPECT_TRUE(p.uses_index_seek);
    EXPECT_NE(p.render().find("index seek e:Equipment(equipment_id='CWC04009')"), std::string::npos)
        << p.render();
}

TEST(Plan, WhereEqualitySeedUsesIndexSeek) {
    PropertyGraph g = chiller_fixture();
    auto p = cy::plan(cy::parse("MATCH (e:Event) WHERE e.equipment_id = 'CWC04009' AND e.year = 2019 RETURN count(e)"), g);
    EXPECT_TRUE(p.uses_index_seek);
    EXPECT_NE(p.render().find("index seek e:Event"), std::string::npos) << p.render();
}

TEST(Plan, LabelOnlySeedUsesLabelScan) {
    PropertyGraph g = chiller_fixture();
    auto p = cy::plan(cy::parse("MATCH (e:Event) RETURN e"), g);
    EXPECT_FALSE(p.uses_index_seek);
    EXPECT_NE(p.render().find("label scan e:Event"), std::string::npos) << p.render();
}

TEST(Plan, NoLabelSeedUsesAllNodesScan) {
    PropertyGraph g = chiller_fixture();
    auto p = cy::plan(cy::parse("MATCH (n) RETURN n"), g);
    EXPECT_NE(p.render().find("all nodes scan n"), std::string::npos) << p.render();
}

TEST(Plan, IndicesOffDegradesSeedsToFullScans) {
    PropertyGraph g = chiller_fixture();
    auto q = cy::parse("MATCH (e:Event) WHERE e.equipment_id = 'CWC04009' RETURN e");
    auto p = cy::plan(q, g, {false});
    EXPECT_FALSE(p.uses_index_seek);
    EXPECT_NE(p.render().find("all nodes scan e"), std::string::npos) << p.render();
}

TEST(Plan, CheaperSideSeedsExpansion) {
    PropertyGraph g;
    auto rare = g.create_node({"Rare"}, {});
    for (int i = 0; i < 40; ++i) {
        auto c = g.create_node({"Common"}, {});
        if (i < 3) g.create_edge("R", rare, c);
    }
    auto p = cy::plan(cy::parse("MATCH (r:Rare)-[:R]->(c:Common) RETURN c"), g);
    std::string r = p.render();
    auto seed = r.find("label scan r:Rare");
    auto expand = r.find("expand");
    ASSERT_NE(seed, std::string::npos) << r;
    ASSERT_NE(expand, std::string::npos) << r;
    EXPECT_LT(seed, expand) << r;
    // flipping the textual direction must not change the seeding choice
    auto p2 = cy::plan(cy::parse("MATCH (c:Common)<-[:R]-(r:Rare) RETURN c"), g);
    EXPECT_NE(p2.render().find("label scan r:Rare"), std::string::npos) << p2.render();
}

TEST(Plan, SecondClauseReusesBoundVariable) {
    PropertyGraph g;
    auto a = g.create_node({"N"}, {});
    auto b = g.create_node({"N"}, {});
    g.create_edge("R", a, b);
    auto p = cy::plan(cy::parse("MATCH (a:N)-[:R]->(b:N) MATCH (b)-[:R]->(c:N) RETURN c"), g);
    EXPECT_NE(p.render().find("bound ref b"), std::string::npos) << p.render();
}

// ---- CREATE ----

TEST(Create, SingleNodeDefaultProvenance) {
    PropertyGraph g;
    auto res = cy::execute_create(cy::parse("CREATE (fm:FailureMode {name: 'Bearing Wear'})"), g,
                                  Provenance::DataDerived);
    ASSERT_EQ(res.nodes.size(), 1u);
    EXPECT_TRUE(res.edges.empty());
    const auto& n = g.node(res.nodes[0]);
    EXPECT_TRUE(n.has_label("FailureMode"));
    ASSERT_NE(n.property("name"), nullptr);
    EXPECT_EQ(n.property("name")->text(), "Bearing Wear");
    EXPECT_EQ(n.provenance, Provenance::DataDerived);
    EXPECT_EQ(n.property("source"), nullptr);
}

TEST(Create, LlmDerivedInjectsSourceTag) {
    PropertyGraph g;
    auto res = cy::execute_create(cy::parse("CREATE (fm:FailureMode {name: 'Compressor Surge'})"),
                                  g, Provenance::LlmDerived);
    const auto& n = g.node(res.nodes[0]);
    EXPECT_EQ(n.provenance, Provenance::LlmDerived);
    ASSERT_NE(n.property("source"), nullptr);
    EXPECT_EQ(n.property("source")->text(), "LLM-derived");
}

TEST(Create, LlmDerivedKeepsExplicitSource) {
    PropertyGraph g;
    auto res = cy::execute_create(
        cy::parse("CREATE (fm:FailureMode {name: 'Drift', source: 'analyst'})"), g,
        Provenance::LlmDerived);
    EXPECT_EQ(g.node(res.nodes[0]).property("source")->text(), "analyst");
}

TEST(Create, NodesAndEdge) {
    PropertyGraph g;
    auto res = cy::execute_create(
        cy::parse("CREATE (a:X {k: '1'})-[:R {w: 2}]->(b:Y {k: '2'})"), g,
        Provenance::DataDerived);
    ASSERT_EQ(res.nodes.size(), 2u);
    ASSERT_EQ(res.edges.size(), 1u);
    const auto& e = g.edge(res.edges[0]);
    EXPECT_EQ(e.type, "R");
    EXPECT_EQ(e.src, res.nodes[0]);
    EXPECT_EQ(e.dst, res.nodes[1]);
    ASSERT_NE(e.property("w"), nullptr);
    EXPECT_EQ(e.property("w")->integer(), 2);
}

TEST(Create, LeftArrowSwapsEndpoints) {
    PropertyGraph g;
    auto res = cy::execute_create(cy::parse("CREATE (a:X)<-[:R]-(b:Y)"), g,
                                  Provenance::DataDerived);
    const auto& e = g.edge(res.edges[0]);
    EXPECT_EQ(e.src, res.nodes[1]);
    EXPECT_EQ(e.dst, res.nodes[0]);
}

TEST(Create, BoundVariableReferenceBuildsSelfLoop) {
    PropertyGraph g;
    auto res = cy::execute_create(cy::parse("CREATE (a:X)-[:R]->(a)"), g,
                                  Provenance::DataDerived);
    ASSERT_EQ(res.nodes.size(), 1u);
    ASSERT_EQ(res.edges.size(), 1u);
    const auto& e = g.edge(res.edges[0]);
    EXPECT_EQ(e.src, e.dst);
}

TEST(Create, MultiplePatterns) {
    PropertyGraph g;
    auto res = cy::execute_create(cy::parse("CREATE (a:X), (b:Y)"), g, Provenance::DataDerived);
    EXPECT_EQ(res.nodes.size(), 2u);
    EXPECT_TRUE(res.edges.empty());
}

TEST(Create, UnboundBareVariableRejected) {
    PropertyGraph g;
    auto msg = validation_message([&] {
        cy::execute_create(cy::parse("CREATE (a)"), g, Provenance::DataDerived);
    });
    EXPECT_NE(msg.find("unbound variable 'a'"), std::string::npos) << msg;
}

TEST(Create, ReboundVariableRejected) {
    PropertyGraph g;
    auto msg = validation_message([&] {
        cy::execute_create(cy::parse("CREATE (a:X), (a:Y)"), g, Provenance::DataDerived);
    });
    EXPECT_NE(msg.find("already bound"), std::string::npos) << msg;
}

TEST(Create, EdgeRequiresTypeAndDirection) {
    PropertyGraph g;
    EXPECT_THROW(cy::execute_create(cy::parse("CREATE (a:X)-->(b:Y)"), g,
                                    Provenance::DataDerived),
                 ValidationError);
    EXPECT_THROW(cy::execute_create(cy::parse("CREATE (a:X)-[:R]-(b:Y)"), g,
                                    Provenance::DataDerived),
                 ValidationError);
}

TEST(Create, EntryPointsRejectWrongStatementKind) {
    PropertyGraph g;
    EXPECT_THROW(cy::execute(cy::parse("CREATE (a:X)"), g), ValidationError);
    EXPECT_THROW(cy::execute_create(cy::parse("MATCH (n) RETURN n"), g, Provenance::DataDerived),
                 ValidationError);
}

// ---- validation ----

TEST(Validate, EdgeVariableReuseRejected) {
    PropertyGraph g;
    auto msg = validation_message([&] {
        run(g, "MATCH (a)-[r:R]->(b)-[r:S]->(c) RETURN a");
    });
    EXPECT_NE(msg.find("relationship variable 'r' reused"), std::string::npos) << msg;
}

TEST(Validate, NodeEdgeKindConflictRejected) {
    PropertyGraph g;
    auto msg = validation_message([&] {
        run(g, "MATCH (a)-[x:R]->(b), (x)-[:S]->(c) RETURN a");
    });
    EXPECT_NE(msg.find("both node and relationship"), std::string::npos) << msg;
}

TEST(Validate, UnboundVariablesRejected) {
    PropertyGraph g;
    EXPECT_THROW(run(g, "MATCH (a:N) WHERE z.p = 1 RETURN a"), ValidationError);
    EXPECT_THROW(run(g, "MATCH (a:N) RETURN z.p"), ValidationError);
    EXPECT_THROW(run(g, "MATCH (a:N) RETURN a.p ORDER BY z.p"), ValidationError);
}

TEST(Validate, OrderByAggregateRequiresAggregatedReturn) {
    PropertyGraph g;
    auto msg = validation_message([&] {
        run(g, "MATCH (n:N) RETURN n.p ORDER BY count(n)");
    });
    EXPECT_NE(msg.find("aggregated RETURN"), std::string::npos) << msg;
    // and the positive case is accepted
    EXPECT_NO_THROW(run(g, "MATCH (n:N) RETURN n.p, count(n) ORDER BY count(n)"));
}

TEST(Validate, OrderByUnprojectedKeyRejectedUnderDistinctAndAggregation) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(1))}, {"q", Scalar("x")}});
    EXPECT_THROW(run(g, "MATCH (n:N) RETURN DISTINCT n.p ORDER BY n.q"), ValidationError);
    EXPECT_THROW(run(g, "MATCH (n:N) RETURN n.p, count(*) ORDER BY n.q"), ValidationError);
    // unprojected keys are fine for plain projections
    EXPECT_NO_THROW(run(g, "MATCH (n:N) RETURN n.p ORDER BY n.q"));
}

TEST(Validate, AliasResolvesInOrderBy) {
    PropertyGraph g;
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(2))}});
    g.create_node({"N"}, {{"p", Scalar(std::int64_t(1))}});
    auto t = run(g, "MATCH (n:N) RETURN n.p AS value ORDER BY value DESC");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0]->integer(), 2);
}

// ---- randomized oracle equivalence ----

namespace {

struct QueryGen {
    std::mt19937& rng;
    bool large;

    std::vector<std::string> node_vars;
    std::vector<std::string> edge_vars;
    std::set<std::string> taken;
    int edge_counter = 0;
    int total_slots = 0;
    int unlabeled_slots = 0;

    int irand(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }
    bool chance(double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(irand(0, static_cast<int>(v.size()) - 1))];
    }

    std::string label() { return std::vector<std::string>{"A", "B", "C"}[irand(0, 2)]; }
    std::string etype() { return std::vector<std::string>{"R", "S", "T"}[irand(0, 2)]; }

    cy::NodePattern gen_node(bool force_named, bool force_label) {
        cy::NodePattern np;
        ++total_slots;
        const bool named = force_named || !chance(0.25);
        if (named) {
            if (!node_vars.empty() && chance(0.3)) {
                np.var = pick(node_vars);
            } else {
                static const char* pool[] = {"a", "b", "c", "d", "e", "f"};
                std::vector<std::string> avail;
                for (const char* s : pool)
                    if (!taken.count(s)) avail.push_back(s);
                if (avail.empty()) {
                    np.var = pick(node_vars);
                } else {
                    np.var = pick(avail);
                    taken.insert(*np.var);
                    node_vars.push_back(*np.var);
                }
            }
        }
        // keep the unconstrained cross product small enough for the oracle
        bool want_label = force_label || chance(0.6) || unlabeled_slots >= 2;
        if (want_label)
            np.labels.push_back(label());
        else
            ++unlabeled_slots;
        if (chance(0.25)) {
            if (chance(0.5)) {
                // sometimes written as a float literal to exercise numeric
                // kind merging through the property index
                if (chance(0.2))
                    np.props.emplace_back("p", Scalar(static_cast<double>(irand(0, 4))));
                else
                    np.props.emplace_back("p", Scalar(std::int64_t(irand(0, 4))));
            } else {
                np.props.emplace_back("q", Scalar(std::vector<std::string>{"u", "v", "w"}
                                                      [static_cast<std::size_t>(irand(0, 2))]));
            }
        }
        return np;
    }

    cy::EdgePattern gen_edge() {
        cy::EdgePattern ep;
        if (chance(0.35)) {
            ep.var = "r" + std::to_string(edge_counter++);
            taken.insert(*ep.var);
            edge_vars.push_back(*ep.var);
        }
        if (chance(0.7)) ep.types.push_back(etype());
        const double d = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        ep.direction = d < 0.45   ? assetgraph::Direction::Out
                       : d < 0.70 ? assetgraph::Direction::In
                                  : assetgraph::Direction::Both;
        if (chance(0.15)) ep.props.emplace_back("w", Scalar(std::int64_t(irand(0, 3))));
        return ep;
    }

    cy::PathPattern gen_path(int max_nodes, bool first_query_slot) {
        cy::PathPattern path;
        int want = 1 + (chance(0.7) ? irand(0, 1) + (chance(0.35) ? 1 : 0) : 0);
        if (large) want = irand(2, 3);
        int n = std::min(want, max_nodes);
        if (n < 1) n = 1;
        for (int i = 0; i < n; ++i) {
            if (i) path.edges.push_back(gen_edge());
            path.nodes.push_back(gen_node(first_query_slot && i == 0, large && i == 0));
        }
        return path;
    }

    cy::Operand rand_prop_operand() {
        if (!edge_vars.empty() && chance(0.12))
            return cy::Operand::make_property(pick(edge_vars), "w");
        static const char* props[] = {"p", "q", "r", "flag"};
        return cy::Operand::make_property(pick(node_vars), props[irand(0, 3)]);
    }

    cy::BoolExprPtr gen_leaf() {
        cy::Comparison c;
        if (!edge_vars.empty() && chance(0.15)) {
            c.lhs = cy::Operand::make_property(pick(edge_vars), "w");
            c.op = std::vector<cy::Cmp>{cy::Cmp::Eq, cy::Cmp::Ne, cy::Cmp::Lt, cy::Cmp::Ge}
                [static_cast<std::size_t>(irand(0, 3))];
            c.rhs = cy::Operand::make_literal(Scalar(std::int64_t(irand(0, 3))));
            return cy::BoolExpr::comparison(std::move(c));
        }
        const std::string v = pick(node_vars);
        switch (irand(0, 3)) {
            case 0: {    // integer property
                c.lhs = cy::Operand::make_property(v, "p");
                c.op = std::vector<cy::Cmp>{cy::Cmp::Eq, cy::Cmp::Ne, cy::Cmp::Lt, cy::Cmp::Le,
                                            cy::Cmp::Gt, cy::Cmp::Ge}
                    [static_cast<std::size_t>(irand(0, 5))];
                if (chance(0.12) && node_vars.size() > 1)
                    c.rhs = cy::Operand::make_property(pick(node_vars), chance(0.5) ? "p" : "r");
                else if (chance(0.2))
                    c.rhs = cy::Operand::make_literal(Scalar(static_cast<double>(irand(0, 4))));
                else
                    c.rhs = cy::Operand::make_literal(Scalar(std::int64_t(irand(0, 4))));
                break;
            }
            case 1: {    // text property
                c.lhs = cy::Operand::make_property(v, "q");
                c.op = std::vector<cy::Cmp>{cy::Cmp::Eq, cy::Cmp::Ne, cy::Cmp::Contains,
                                            cy::Cmp::StartsWith}
                    [static_cast<std::size_t>(irand(0, 3))];
                c.rhs = cy::Operand::make_literal(Scalar(std::vector<std::string>{"u", "v", "w"}
                                                             [static_cast<std::size_t>(irand(0, 2))]));
                break;
            }
            case 2: {    // float property
                c.lhs = cy::Operand::make_property(v, "r");
                c.op = std::vector<cy::Cmp>{cy::Cmp::Lt, cy::Cmp::Le, cy::Cmp::Gt, cy::Cmp::Ge,
                                            cy::Cmp::Eq}
                    [static_cast<std::size_t>(irand(0, 4))];
                if (chance(0.25))
                    c.rhs = cy::Operand::make_literal(Scalar(std::int64_t(irand(0, 2))));
                else
                    c.rhs = cy::Operand::make_literal(Scalar(0.5 * irand(1, 5)));
                break;
            }
            default: {    // boolean property
                c.lhs = cy::Operand::make_property(v, "flag");
                c.op = chance(0.5) ? cy::Cmp::Eq : cy::Cmp::Ne;
                c.rhs = cy::Operand::make_literal(Scalar(chance(0.5)));
                break;
            }
        }
        return cy::BoolExpr::comparison(std::move(c));
    }

    cy::BoolExprPtr gen_bool(int depth) {
        if (depth == 0 || chance(0.55)) {
            auto e = gen_leaf();
            if (chance(0.12)) e = cy::BoolExpr::negate(std::move(e));
            return e;
        }
        auto l = gen_bool(depth - 1);
        auto r = gen_bool(depth - 1);
        auto e = cy::BoolExpr::combine(
            chance(0.5) ? cy::BoolExpr::Kind::And : cy::BoolExpr::Kind::Or, std::move(l),
            std::move(r));
        if (chance(0.1)) e = cy::BoolExpr::negate(std::move(e));
        return e;
    }

    cy::Query gen() {
        cy::Query q;
        const int n_clauses = large ? 1 : (chance(0.2) ? 2 : 1);
        for (int ci = 0; ci < n_clauses; ++ci) {
            cy::MatchClause clause;
            const int n_paths = (!large && chance(0.25) && total_slots < 3) ? 2 : 1;
            for (int pi = 0; pi < n_paths; ++pi) {
                int room = 4 - total_slots;
                if (room < 1) break;
                clause.patterns.push_back(gen_path(room, ci == 0 && pi == 0));
            }
            if (!clause.patterns.empty()) q.matches.push_back(std::move(clause));
        }
        if (chance(0.55)) q.where = gen_bool(2);

        const bool aggregated = chance(0.3);
        const int n_items = irand(1, 3);
        bool has_agg = false;
        for (int i = 0; i < n_items; ++i) {
            cy::ReturnItem item;
            const bool make_agg = aggregated && ((i == n_items - 1 && !has_agg) || chance(0.5));
            if (make_agg) {
                has_agg = true;
                switch (irand(0, 5)) {
                    case 0:
                        item.expr = cy::ReturnExpr::make_aggregate(
                            cy::AggFunc::Count, cy::Operand::make_variable(pick(node_vars)));
                        break;
                    case 1: item.expr = cy::ReturnExpr::make_count_star(); break;
                    case 2:
                        item.expr = cy::ReturnExpr::make_aggregate(
                            cy::AggFunc::Sum, cy::Operand::make_property(pick(node_vars), "p"));
                        break;
                    case 3:
                        item.expr = cy::ReturnExpr::make_aggregate(
                            cy::AggFunc::Avg, cy::Operand::make_property(pick(node_vars), "r"));
                        break;
                    case 4:
                        item.expr = cy::ReturnExpr::make_aggregate(
                            cy::AggFunc::Min, cy::Operand::make_property(pick(node_vars), "p"));
                        break;
                    default:
                        item.expr = cy::ReturnExpr::make_aggregate(
                            cy::AggFunc::Max, cy::Operand::make_property(pick(node_vars), "q"));
                        break;
                }
            } else if (chance(0.25)) {
                item.expr = cy::ReturnExpr::make_operand(
                    cy::Operand::make_variable(pick(node_vars)));
            } else {
                item.expr = cy::ReturnExpr::make_operand(rand_prop_operand());
            }
            if (chance(0.3)) item.alias = "c" + std::to_string(i);
            q.items.push_back(std::move(item));
        }
        q.distinct = chance(0.25);

        if (chance(0.4)) {
            const int n_keys = irand(1, 2);
            for (int k = 0; k < n_keys; ++k) {
                cy::OrderItem key;
                key.descending = chance(0.4);
                const bool must_project = aggregated || q.distinct;
                if (must_project || chance(0.7)) {
                    const auto& item =
                        q.items[static_cast<std::size_t>(irand(0, n_items - 1))];
                    if (item.alias && chance(0.3))
                        key.expr = cy::ReturnExpr::make_operand(
                            cy::Operand::make_variable(*item.alias));
                    else
                        key.expr = item.expr;
                } else {
                    static const char* props[] = {"p", "q", "r", "flag"};
                    key.expr = cy::ReturnExpr::make_operand(
                        cy::Operand::make_property(pick(node_vars), props[irand(0, 3)]));
                }
                q.order_by.push_back(std::move(key));
            }
        }
        if (chance(0.3)) q.limit = irand(0, 5);
        return q;
    }
};

PropertyGraph gen_graph(std::mt19937& rng, bool large) {
    auto irand = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto chance = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    PropertyGraph g;
    const int n = large ? irand(120, 200) : irand(3, 25);
    const int m = large ? irand(300, 600) : irand(0, 2 * n);
    const char* labels[] = {"A", "B", "C"};
    const char* texts[] = {"u", "v", "w"};
    const char* types[] = {"R", "S", "T"};
    std::vector<assetgraph::NodeId> ids;
    for (int i = 0; i < n; ++i) {
        std::set<std::string> ls{labels[irand(0, 2)]};
        if (chance(0.3)) ls.insert(labels[irand(0, 2)]);
        PropertyMap props;
        if (chance(0.8)) props.emplace("p", Scalar(std::int64_t(irand(0, 4))));
        if (chance(0.7)) props.emplace("q", Scalar(texts[irand(0, 2)]));
        if (chance(0.6)) props.emplace("r", Scalar(0.5 * irand(1, 5)));
        if (chance(0.5)) props.emplace("flag", Scalar(chance(0.5)));
        ids.push_back(g.create_node(std::move(ls), std::move(props)));
    }
    for (int j = 0; j < m; ++j) {
        auto src = ids[static_cast<std::size_t>(irand(0, n - 1))];
        auto dst = chance(0.05) ? src : ids[static_cast<std::size_t>(irand(0, n - 1))];
        PropertyMap props;
        if (chance(0.5)) props.emplace("w", Scalar(std::int64_t(irand(0, 3))));
        g.create_edge(types[irand(0, 2)], src, dst, std::move(props));
    }
    return g;
}

void expect_sequences_equal(const cy::ResultTable& got, const cyporacle::Table& want) {
    ASSERT_EQ(got.rows.size(), want.rows.size());
    for (std::size_t i = 0; i < got.rows.size(); ++i)
        ASSERT_EQ(row_repr(got.rows[i]), row_repr(want.rows[i])) << "row " << i;
}

}    // namespace

TEST(RandomizedOracle, EngineMatchesNestedScanReference) {
    const auto started = std::chrono::steady_clock::now();
    constexpr int kRounds = 500;
    for (int round = 0; round < kRounds; ++round) {
        std::mt19937 rng(1000u + static_cast<unsigned>(round));
        const bool large = round >= 460;
        PropertyGraph g = gen_graph(rng, large);
        QueryGen gen{rng, large, {}, {}, {}, 0, 0, 0};
        cy::Query q = gen.gen();
        const std::string text = cy::render(q);
        SCOPED_TRACE("round " + std::to_string(round) + ": " + text);

        // canonical text round-trips to the identical tree
        cy::Query q2 = cy::parse(text);
        ASSERT_TRUE(q2 == q);
        ASSERT_EQ(cy::render(q2), text);

        cy::ResultTable on = cy::execute(q2, g, {true});
        cy::ResultTable off = cy::execute(q2, g, {false});
        cyporacle::Table want = cyporacle::run(g, q2);

        ASSERT_EQ(on.columns, want.columns);
        ASSERT_EQ(off.columns, want.columns);

        if (!q2.order_by.empty()) {
            expect_sequences_equal(on, want);
            expect_sequences_equal(off, want);
        } else if (!q2.limit) {
            ASSERT_EQ(sorted_reprs(on.rows), sorted_reprs(want.rows));
            ASSERT_EQ(sorted_reprs(off.rows), sorted_reprs(want.rows));
        } else {
            // unordered LIMIT: any sub-multiset of the full result of the
            // right cardinality is acceptable
            cy::Query qfull = q2;
            qfull.limit.reset();
            cyporacle::Table full = cyporacle::run(g, qfull);
            const std::size_t want_n =
                std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(*q2.limit, 0)),
                                      full.rows.size());
            std::map<std::string, int> budget;
            for (const auto& r : full.rows) budget[row_repr(r)]++;
            for (const auto* table : {&on, &off}) {
                ASSERT_EQ(table->rows.size(), want_n);
                std::map<std::string, int> pool = budget;
                for (const auto& r : table->rows) {
                    auto it = pool.find(row_repr(r));
                    ASSERT_TRUE(it != pool.end() && it->second > 0) << row_repr(r);
                    --it->second;
                }
            }
            ASSERT_EQ(want.rows.size(), want_n);
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    EXPECT_LT(elapsed, 60.0) << "oracle equivalence run too slow: " << elapsed << "s";
}
