#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "assetgraph/analytics/mtbf.hpp"
#include "assetgraph/etl/build.hpp"
#include "assetgraph/etl/fixture.hpp"
#include "assetgraph/gak/gap.hpp"
#include "assetgraph/router/router.hpp"
#include "assetgraph/vector/embedding.hpp"

using namespace assetgraph;
using namespace assetgraph::router;

namespace {

constexpr std::int64_t kHour = 3600;

const etl::BuildResult& fixture() {
    static etl::BuildResult result = [] {
        vec::DeterministicTestEmbedder embedder;
        return etl::build_graph(etl::parse_bundle(etl::make_fixture_bundle()), embedder);
    }();
    return result;
}

const Router& fixture_router() {
    static Router r(fixture().graph);
    return r;
}

NodeId add_equipment(PropertyGraph& g, const std::string& ext, const std::string& name,
                     const std::string& cls = "") {
    PropertyMap props = {{"equipment_id", Scalar(ext)}, {"name", Scalar(name)}};
    if (!cls.empty()) props["iso14224_class"] = Scalar(cls);
    return g.create_node({"Equipment"}, std::move(props));
}

NodeId add_event(PropertyGraph& g, NodeId eq, const std::string& kind, std::int64_t epoch,
                 const std::string& payload = "") {
    int year = 0;
    unsigned month = 0, day = 0;
    Timestamp::civil_from_days(epoch >= 0 ? epoch / 86400 : (epoch - 86399) / 86400, year,
                               month, day);
    const std::string ext = g.node(eq).property("equipment_id")->text();
    NodeId ev = g.create_node({"Event"}, {{"equipment_id", Scalar(ext)},
                                          {"kind", Scalar(kind)},
                                          {"ts", Scalar(Timestamp{epoch})},
                                          {"year", Scalar(static_cast<std::int64_t>(year))},
                                          {"payload", Scalar(payload)}});
    g.create_edge("FOR_EQUIPMENT", ev, eq);
    return ev;
}

NodeId add_mode(PropertyGraph& g, const std::string& name, std::vector<float> v) {
    return g.create_node(
        {"FailureMode"},
        {{"name", Scalar(name)},
         {"embedding", Scalar(vec::embedding_to_text(vec::EmbeddingVector::from(std::move(v))))}});
}

} // namespace

// ---------------------------------------------------------------------------
// Knowledge-gap probe
// ---------------------------------------------------------------------------

TEST(Gap, CanonicalKeyNormalizes) {
    EXPECT_EQ(gak::canonical_gap_key("Electric  Motors"), "electric motor");
    EXPECT_EQ(gak::canonical_gap_key("batteries"), "battery");
    EXPECT_EQ(gak::canonical_gap_key("Switches"), "switch");
    EXPECT_EQ(gak::canonical_gap_key("  compressor "), "compressor");
    EXPECT_EQ(gak::canonical_gap_key("glass"), "glass");
}

TEST(Gap, UnknownSubjectIsAGap) {
    PropertyGraph g;
    auto gap = gak::knowledge_gap("What are the failure modes of an electric motor?", g);
    ASSERT_TRUE(gap.has_value());
    EXPECT_EQ(*gap, "electric motor");
}

TEST(Gap, KnownEquipmentCoversItsClass) {
    PropertyGraph g;
    add_equipment(g, "CWC04010", "Chiller 6", "CH");
    EXPECT_FALSE(gak::knowledge_gap("What are the failure modes of a chiller?", g));
    EXPECT_FALSE(gak::knowledge_gap("failure modes of Chiller 6", g));
    EXPECT_TRUE(gak::knowledge_gap("failure modes of a steam turbine", g));
}

TEST(Gap, EnrichedEquipmentClosesTheGap) {
    PropertyGraph g;
    const std::string q = "What are the failure modes of electric motors?";
    ASSERT_TRUE(gak::knowledge_gap(q, g));
    add_equipment(g, "EM-01", "Electric Motor");
    EXPECT_FALSE(gak::knowledge_gap(q, g));
}

TEST(Gap, UnrelatedQuestionsNeverGap) {
    PropertyGraph g;
    EXPECT_FALSE(gak::knowledge_gap("How many events for CWC04009 in 2019?", g));
    EXPECT_FALSE(gak::knowledge_gap("Rank all equipment by criticality", g));
}

// ---------------------------------------------------------------------------
// Entity resolution
// ---------------------------------------------------------------------------

TEST(Resolve, AliasFormsAllResolve) {
    PropertyGraph g;
    NodeId chiller = add_equipment(g, "CWC04010", "Chiller 6", "CH");
    add_equipment(g, "CWC04011", "Chiller 7", "CH");
    EntityResolver r(g);
    for (const std::string text :
         {"status of chiller 6", "status of Chiller-6", "status of CH06", "status of ch6",
          "status of CWC04010", "status of chiller6"}) {
        auto hit = r.first(text);
        ASSERT_TRUE(hit.has_value()) << text;
        EXPECT_EQ(*hit, chiller) << text;
    }
    EXPECT_FALSE(r.first("status of chiller 66").has_value());
    EXPECT_FALSE(r.first("nothing to see").has_value());
}

TEST(Resolve, MentionsOrderedByPosition) {
    PropertyGraph g;
    NodeId a = add_equipment(g, "A1", "AHU 1", "AH");
    NodeId c = add_equipment(g, "CWC04010", "Chiller 6", "CH");
    EntityResolver r(g);
    auto hits = r.mentions("Is AHU 1 correlated with Chiller 6?");
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0], a);
    EXPECT_EQ(hits[1], c);
}

TEST(Resolve, ClassMentionsGroupByFirstWord) {
    const EntityResolver r(fixture().graph);
    auto classes = r.class_mentions("Are AHU anomalies correlated with chiller drops?");
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0].first, "ahu");
    EXPECT_EQ(classes[0].second.size(), 2u);
    EXPECT_EQ(classes[1].first, "chiller");
    EXPECT_EQ(classes[1].second.size(), 9u);
}

TEST(Resolve, FailureModePrefersLongestMatch) {
    PropertyGraph g;
    add_mode(g, "Compressor Surge", {1, 0});
    NodeId overheating = add_mode(g, "Compressor Overheating", {0, 1});
    EntityResolver r(g);
    auto hit = r.failure_mode("recent compressor overheating incidents");
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(*hit, overheating);
}

TEST(Resolve, YearAndWorkOrderExtraction) {
    EXPECT_EQ(extract_year("events in 2019 please"), 2019);
    EXPECT_FALSE(extract_year("trace WO-2024-0042").has_value());
    EXPECT_FALSE(extract_year("id CWC04009 has no year").has_value());
    EXPECT_EQ(extract_work_order("Trace events leading to WO-2024-0042"), "WO-2024-0042");
    EXPECT_EQ(extract_work_order("what about wo-17?"), "WO-17");
    EXPECT_FALSE(extract_work_order("no token").has_value());
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

TEST(Routing, PinnedExamplesLandOnTheRightTier) {
    const Router& r = fixture_router();

    auto d1 = r.route({"How many events for CWC04009 in 2019?"});
    EXPECT_EQ(d1.tier, Tier::Deterministic);
    EXPECT_EQ(d1.handler, "event-count");

    auto d2 = r.route({"Explain the thermodynamics of vapor compression"});
    EXPECT_EQ(d2.tier, Tier::Nlq);

    auto d3 = r.route({"What are the failure modes of an electric motor?"});
    EXPECT_EQ(d3.tier, Tier::Gak);
    EXPECT_EQ(d3.gap_key, "electric motor");
}

TEST(Routing, CategoryQuestionsPickTheIntendedHandler) {
    const Router& r = fixture_router();
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"What equipment is affected if Chiller 6 fails?", "multi-hop-dependency"},
        {"Are AHU anomalies correlated with chiller temperature drops?",
         "cross-asset-correlation"},
        {"Which chillers had failures similar to Chiller 3?", "failure-similarity"},
        {"Rank all equipment by operational criticality", "criticality"},
        {"Schedule maintenance minimizing downtime and cost", "maintenance-optimization"},
        {"Trace events leading to WO-2024-0042", "root-cause"},
        {"What is MTBF for Chiller 6's compressor?", "temporal-mtbf"},
        {"How many events for CWC04009 in 2019?", "event-count"},
        {"Which sensors can detect Bearing Wear?", "fmsr-mapping"},
        {"Show work orders for Chiller 6", "work-order-lookup"},
        {"Bundle work orders for Chiller 6", "work-order-bundling"},
        {"Evaluate monitoring rules for Chiller 6", "rule-logic"},
        {"Asset health profile for CWC04005", "phm-health"},
        {"What sensors does Chiller 6 have?", "iot-status"},
    };
    for (const auto& [text, handler] : cases) {
        auto first = r.route({text});
        auto second = r.route({text});
        EXPECT_EQ(first.tier, Tier::Deterministic) << text;
        EXPECT_EQ(first.handler, handler) << text;
        EXPECT_EQ(second.handler, first.handler) << text;
    }
}

TEST(Routing, CatalogCoversAllCategories) {
    EXPECT_GE(handler_catalog().size(), 13u);
    std::set<std::string> names;
    for (const auto& spec : handler_catalog()) names.insert(spec.name);
    EXPECT_EQ(names.size(), handler_catalog().size());
}

TEST(Routing, ForcedTierWins) {
    Router r(fixture().graph);
    r.set_nlq([](const Question&) {
        Answer a;
        a.tier = Tier::Nlq;
        a.text = "canned";
        a.trace = "MATCH (n) RETURN n";
        return a;
    });

    Question det{"Explain the thermodynamics of vapor compression"};
    det.forced_tier = Tier::Deterministic;
    auto refused = r.answer(det);
    EXPECT_EQ(refused.tier, Tier::Refused);

    Question nlq{"How many events for CWC04009 in 2019?"};
    nlq.forced_tier = Tier::Nlq;
    auto canned = r.answer(nlq);
    EXPECT_EQ(canned.tier, Tier::Nlq);
    EXPECT_EQ(canned.text, "canned");
}

TEST(Routing, EmptyQuestionIsRefusedNotAnError) {
    auto a = fixture_router().answer({""});
    EXPECT_EQ(a.tier, Tier::Refused);
    EXPECT_TRUE(a.trace.empty());
}

TEST(Routing, UnconfiguredTiersRefusePolitely) {
    Router r(fixture().graph);
    auto a = r.answer({"Explain the thermodynamics of vapor compression"});
    EXPECT_EQ(a.tier, Tier::Refused);
    EXPECT_NE(a.text.find("not configured"), std::string::npos);
}

TEST(Routing, ExtractionMissFallsThroughToNlq) {
    PropertyGraph g;
    add_equipment(g, "P1", "Pump 1");
    Router r(g);
    r.set_nlq([](const Question&) {
        Answer a;
        a.tier = Tier::Nlq;
        a.text = "from nlq";
        a.trace = "MATCH (e:Event) RETURN count(e)";
        return a;
    });
    // mtbf trigger fires but no known equipment appears in the text
    auto a = r.answer({"What is the MTBF for Compressor 9?"});
    EXPECT_EQ(a.tier, Tier::Nlq);
    EXPECT_EQ(a.text, "from nlq");
    EXPECT_EQ(a.trace, "temporal-mtbf:extraction-miss; MATCH (e:Event) RETURN count(e)");
}

// ---------------------------------------------------------------------------
// Handler answers
// ---------------------------------------------------------------------------

TEST(Handlers, EventCountMatchesHandBuiltFixture) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "CWC04009", "Chiller 5", "CH");
    NodeId other = add_equipment(g, "CWC04010", "Chiller 6", "CH");
    const std::int64_t t2019 = Timestamp::from_civil(2019, 3, 1).epoch_seconds;
    const std::int64_t t2018 = Timestamp::from_civil(2018, 3, 1).epoch_seconds;
    for (int i = 0; i < 3; ++i) add_event(g, eq, "alert", t2019 + i * kHour);
    for (int i = 0; i < 2; ++i) add_event(g, eq, "alert", t2018 + i * kHour);
    add_event(g, other, "alert", t2019);

    Router r(g);
    auto a = r.answer({"How many events for CWC04009 in 2019?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "event-count");
    EXPECT_EQ(a.text, "3 events for CWC04009 in 2019.");
    ASSERT_EQ(a.payload.at("rows").size(), 1u);
    EXPECT_EQ(a.payload.at("rows")[0][0].get<std::int64_t>(), 3);
}

TEST(Handlers, EventCountOnFixtureMatchesRecount) {
    auto a = fixture_router().answer({"How many events for CWC04009 in 2019?"});
    ASSERT_EQ(a.tier, Tier::Deterministic);

    std::size_t expected = 0;
    for (const auto& [id, node] : fixture().graph.nodes()) {
        if (!node.has_label("Event")) continue;
        const Scalar* ext = node.property("equipment_id");
        const Scalar* year = node.property("year");
        if (ext && ext->is_text() && ext->text() == "CWC04009" && year &&
            year->is_integer() && year->integer() == 2019)
            ++expected;
    }
    EXPECT_GT(expected, 0u);
    EXPECT_EQ(a.payload.at("rows")[0][0].get<std::size_t>(), expected);
}

TEST(Handlers, EventCountForUnknownEquipmentIsZeroNotError) {
    auto a = fixture_router().answer({"How many events for CWC99999 in 2019?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.text, "0 events for CWC99999 in 2019.");
}

TEST(Handlers, EventCountUnderstandsKindsAndOtherNouns) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "P1", "Pump 1");
    const std::int64_t t = Timestamp::from_civil(2020, 1, 1).epoch_seconds;
    add_event(g, eq, "failure", t);
    add_event(g, eq, "failure", t + kHour);
    add_event(g, eq, "alert", t + 2 * kHour);
    NodeId s = g.create_node({"Sensor"}, {{"sensor_id", Scalar(std::string("P1-S01"))},
                                          {"type", Scalar(std::string("pressure"))}});
    g.create_edge("HAS_SENSOR", eq, s);

    Router r(g);
    EXPECT_EQ(r.answer({"How many failures for Pump 1?"}).text, "2 failures for P1.");
    EXPECT_EQ(r.answer({"How many alerts for Pump 1?"}).text, "1 alerts for P1.");
    EXPECT_EQ(r.answer({"How many sensors does Pump 1 have?"}).text, "1 sensor.");
}

TEST(Handlers, CascadeAnswerListsDependentsWithHops) {
    auto a = fixture_router().answer({"What equipment is affected if Chiller 6 fails?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "multi-hop-dependency");
    EXPECT_EQ(a.payload.at("root").get<std::string>(), "CWC04010");
    const auto& affected = a.payload.at("affected");
    ASSERT_EQ(affected.size(), 2u);
    EXPECT_EQ(affected[0].at("equipment").get<std::string>(), "CWC04014");
    EXPECT_EQ(affected[0].at("hops").get<int>(), 1);
    EXPECT_EQ(affected[1].at("equipment").get<std::string>(), "CWC04015");
    EXPECT_EQ(affected[1].at("hops").get<int>(), 2);
    EXPECT_NE(a.text.find("AHU 1"), std::string::npos);
}

TEST(Handlers, DependencyDirectionIsAnsweredSeparately) {
    auto a = fixture_router().answer({"What does AHU 2 depend on?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    std::set<std::string> deps;
    for (const auto& d : a.payload.at("dependencies")) deps.insert(d.get<std::string>());
    EXPECT_EQ(deps, (std::set<std::string>{"CWC04010", "CWC04011", "CWC04014"}));
}

TEST(Handlers, MtbfAnswerMatchesAnalytics) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "CWC04010", "Chiller 6", "CH");
    const std::int64_t t0 = Timestamp::from_civil(2019, 1, 1).epoch_seconds;
    for (int i = 0; i < 3; ++i) add_event(g, eq, "failure", t0 + i * 240 * kHour);
    add_event(g, eq, "alert", t0 + 5 * kHour);

    Router r(g);
    auto a = r.answer({"What is MTBF for Chiller 6?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "temporal-mtbf");
    auto stat = analytics::mtbf(g, eq);
    ASSERT_TRUE(stat.mean_gap_hours.has_value());
    EXPECT_DOUBLE_EQ(a.payload.at("mean_gap_hours").get<double>(), *stat.mean_gap_hours);
    EXPECT_NE(a.text.find("240.0 hours"), std::string::npos);
}

TEST(Handlers, MtbfHonorsYearWindow) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "CWC04010", "Chiller 6", "CH");
    add_event(g, eq, "failure", Timestamp::from_civil(2018, 6, 1).epoch_seconds);
    add_event(g, eq, "failure", Timestamp::from_civil(2019, 2, 1).epoch_seconds);
    add_event(g, eq, "failure", Timestamp::from_civil(2019, 2, 11).epoch_seconds);

    Router r(g);
    auto a = r.answer({"What was the MTBF for Chiller 6 in 2019?"});
    EXPECT_EQ(a.payload.at("event_count").get<int>(), 2);
    EXPECT_DOUBLE_EQ(a.payload.at("mean_gap_hours").get<double>(), 240.0);
    EXPECT_EQ(a.payload.at("window_start").get<std::string>(), "2019-01-01T00:00:00Z");
}

TEST(Handlers, CriticalityRanksDependedUponAboveLeafDependants) {
    auto a = fixture_router().answer({"Rank all equipment by operational criticality"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    const auto& entries = a.payload.at("entries");
    ASSERT_EQ(entries.size(), 11u);

    double sum = 0.0, prev = 2.0;
    std::map<std::string, double> score;
    for (const auto& e : entries) {
        const double s = e.at("score").get<double>();
        EXPECT_LE(s, prev);
        prev = s;
        sum += s;
        score[e.at("equipment").get<std::string>()] = s;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    // Chiller 6 is depended upon through AHU 1; AHU 2 is a pure dependant
    EXPECT_GT(score.at("CWC04010"), score.at("CWC04015"));
}

TEST(Handlers, SimilarityRanksNearbyModesFirst) {
    PropertyGraph g;
    NodeId motor = add_equipment(g, "M3", "Motor 3", "MO");
    NodeId pump1 = add_equipment(g, "P1", "Pump 1", "PU");
    NodeId pump2 = add_equipment(g, "P2", "Pump 2", "PU");
    add_mode(g, "Bearing Wear", {1.0f, 0.0f, 0.0f, 0.0f});
    add_mode(g, "Bearing Fatigue", {0.99f, 0.141f, 0.0f, 0.0f});
    add_mode(g, "Refrigerant Leak", {0.0f, 0.0f, 1.0f, 0.0f});
    const std::int64_t t = Timestamp::from_civil(2019, 5, 1).epoch_seconds;
    add_event(g, motor, "failure", t, "failure: Bearing Wear");
    add_event(g, pump1, "failure", t + kHour, "failure: Bearing Fatigue");
    add_event(g, pump2, "failure", t + 2 * kHour, "failure: Refrigerant Leak");

    Router r(g);
    auto a = r.answer({"Which pumps had failures similar to Motor 3?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "failure-similarity");
    EXPECT_EQ(a.payload.at("source")[0].get<std::string>(), "Bearing Wear");
    const auto& matches = a.payload.at("matches");
    ASSERT_EQ(matches.size(), 2u);
    EXPECT_EQ(matches[0].at("failure_mode").get<std::string>(), "Bearing Fatigue");
    EXPECT_LT(matches[0].at("distance").get<double>(), matches[1].at("distance").get<double>());
    const auto& equipment = a.payload.at("equipment");
    EXPECT_NE(std::find(equipment.begin(), equipment.end(), nlohmann::json("P1")),
              equipment.end());
}

TEST(Handlers, SimilarityWithNoFailuresIsAnEmptyAnswer) {
    PropertyGraph g;
    add_equipment(g, "M3", "Motor 3", "MO");
    add_mode(g, "Bearing Wear", {1.0f, 0.0f});
    Router r(g);
    auto a = r.answer({"Which pumps had failures similar to Motor 3?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_TRUE(a.payload.at("matches").empty());
    EXPECT_NE(a.text.find("No recorded failures"), std::string::npos);
}

TEST(Handlers, RuleLogicFlagsReadingsOverThreshold) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "P1", "Pump 1");
    NodeId sensor = g.create_node({"Sensor"}, {{"sensor_id", Scalar(std::string("P1-S01"))},
                                               {"type", Scalar(std::string("Temperature"))}});
    g.create_edge("HAS_SENSOR", eq, sensor);
    NodeId rule = g.create_node({"MonitoringRule"},
                                {{"name", Scalar(std::string("High temperature"))},
                                 {"sensor_type", Scalar(std::string("temperature"))},
                                 {"threshold", Scalar(90.0)},
                                 {"direction", Scalar(std::string("above"))}});
    g.create_edge("HAS_RULE", eq, rule);
    const std::int64_t t = Timestamp::from_civil(2020, 2, 1).epoch_seconds;
    NodeId hot = g.create_node({"SensorReading"},
                               {{"value", Scalar(95.0)}, {"ts", Scalar(Timestamp{t})}});
    NodeId cool = g.create_node(
        {"SensorReading"}, {{"value", Scalar(85.0)}, {"ts", Scalar(Timestamp{t + kHour})}});
    g.create_edge("PRODUCED_READING", sensor, hot);
    g.create_edge("PRODUCED_READING", sensor, cool);

    Router r(g);
    auto a = r.answer({"Evaluate monitoring rules for Pump 1"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "rule-logic");
    EXPECT_EQ(a.text, "1 of 2 readings violate monitoring rules.");
    const auto& rows = a.payload.at("rows");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][5].get<std::string>(), "anomaly");
    EXPECT_EQ(rows[1][5].get<std::string>(), "ok");
}

TEST(Handlers, RuleLogicWithoutRulesIsAnEmptyAnswer) {
    auto a = fixture_router().answer({"Evaluate monitoring rules for Chiller 6"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.text, "No monitoring rules with readings to evaluate.");
}

TEST(Handlers, HealthProfileCountsRecords) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "P1", "Pump 1");
    for (int i = 0; i < 2; ++i)
        g.create_edge("HAS_SENSOR", eq,
                      g.create_node({"Sensor"}, {{"sensor_id",
                                                  Scalar("P1-S0" + std::to_string(i + 1))}}));
    const std::int64_t t0 = Timestamp::from_civil(2019, 1, 1).epoch_seconds;
    add_event(g, eq, "failure", t0);
    add_event(g, eq, "failure", t0 + 240 * kHour);
    add_event(g, eq, "alert", t0 + 24 * kHour);
    for (int i = 0; i < 3; ++i) add_event(g, eq, "work_order", t0 + (48 + i * 24) * kHour);

    Router r(g);
    auto a = r.answer({"Asset health profile for Pump 1"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "phm-health");
    std::map<std::string, nlohmann::json> metrics;
    for (const auto& row : a.payload.at("rows")) metrics[row[0].get<std::string>()] = row[1];
    EXPECT_EQ(metrics.at("failures").get<int>(), 2);
    EXPECT_EQ(metrics.at("alerts").get<int>(), 1);
    EXPECT_EQ(metrics.at("anomalies").get<int>(), 0);
    EXPECT_EQ(metrics.at("work_orders").get<int>(), 3);
    EXPECT_EQ(metrics.at("sensors").get<int>(), 2);
    EXPECT_DOUBLE_EQ(metrics.at("mtbf_hours").get<double>(), 240.0);
    EXPECT_NE(a.text.find("2 failures"), std::string::npos);
}

TEST(Handlers, RootCauseTraceRespectsWindowAndDependencyScope) {
    PropertyGraph g;
    NodeId cooler = add_equipment(g, "EQ-C", "Cooler 1");
    NodeId handler = add_equipment(g, "EQ-A", "Air Handler 1");
    NodeId pump = add_equipment(g, "EQ-U", "Pump 9");
    g.create_edge("DEPENDS_ON", handler, cooler);
    const std::int64_t t = Timestamp::from_civil(2019, 6, 10, 12).epoch_seconds;
    add_event(g, handler, "work_order", t, "WO-2024-0042 compressor replaced");
    add_event(g, cooler, "failure", t - 24 * kHour, "failure: Compressor Surge");
    add_event(g, cooler, "alert", t - 100 * kHour, "alert: early warning");
    add_event(g, pump, "anomaly", t - kHour, "anomaly: unrelated");

    Router r(g);
    auto a = r.answer({"Trace events leading to WO-2024-0042"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "root-cause");
    const auto& rows = a.payload.at("rows");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][1].get<std::string>(), "EQ-C");
    EXPECT_EQ(rows[0][2].get<std::string>(), "failure");
    EXPECT_EQ(rows[1][1].get<std::string>(), "EQ-A");
    EXPECT_EQ(rows[1][2].get<std::string>(), "work_order");
}

TEST(Handlers, RootCauseForUnknownWorkOrderIsEmptyNotError) {
    auto a = fixture_router().answer({"Trace events leading to WO-9999-9999"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_NE(a.text.find("not on record"), std::string::npos);
}

TEST(Handlers, BundlingGroupsWorkOrdersWithinWindow) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "P1", "Pump 1");
    const std::int64_t t0 = Timestamp::from_civil(2019, 1, 1).epoch_seconds;
    for (int day : {0, 3, 6, 20, 26})
        add_event(g, eq, "work_order", t0 + day * 86400, "WO-" + std::to_string(day));

    Router r(g);
    auto a = r.answer({"Bundle work orders for Pump 1"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "work-order-bundling");
    EXPECT_EQ(a.text, "2 bundling opportunities within a 7 day window.");
    const auto& rows = a.payload.at("rows");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][3].get<int>(), 3);
    EXPECT_EQ(rows[1][3].get<int>(), 2);
}

TEST(Handlers, WorkOrderLookupFiltersYearAndSortsRecentFirst) {
    PropertyGraph g;
    NodeId eq = add_equipment(g, "P1", "Pump 1");
    add_event(g, eq, "work_order", Timestamp::from_civil(2019, 5, 1).epoch_seconds, "WO-3");
    add_event(g, eq, "work_order", Timestamp::from_civil(2019, 3, 1).epoch_seconds, "WO-2");
    add_event(g, eq, "work_order", Timestamp::from_civil(2018, 7, 1).epoch_seconds, "WO-1");

    Router r(g);
    auto a = r.answer({"Show work orders for Pump 1 in 2019"});
    EXPECT_EQ(a.trace, "work-order-lookup");
    const auto& rows = a.payload.at("rows");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][2].get<std::string>(), "WO-3");
    EXPECT_EQ(rows[1][2].get<std::string>(), "WO-2");
}

TEST(Handlers, CorrelationCountsCoOccurrencesWithinDay) {
    PropertyGraph g;
    NodeId a_eq = add_equipment(g, "P1", "Pump 1");
    NodeId b_eq = add_equipment(g, "P2", "Pump 2");
    const std::int64_t t0 = Timestamp::from_civil(2019, 4, 1).epoch_seconds;
    add_event(g, a_eq, "alert", t0);
    add_event(g, a_eq, "alert", t0 + 10 * kHour);
    add_event(g, b_eq, "anomaly", t0 + 5 * kHour);
    add_event(g, b_eq, "anomaly", t0 + 200 * kHour);
    add_event(g, a_eq, "work_order", t0 + 2 * kHour, "not symptomatic");

    Router r(g);
    auto a = r.answer({"Are Pump 1 alerts correlated with Pump 2 anomalies?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "cross-asset-correlation");
    EXPECT_EQ(a.payload.at("co_occurrences").get<int>(), 2);
    EXPECT_EQ(a.payload.at("left_events").get<int>(), 2);
    EXPECT_EQ(a.payload.at("right_events").get<int>(), 2);
}

TEST(Handlers, CorrelationFallsBackToClassGroups) {
    auto a = fixture_router().answer(
        {"Are AHU anomalies correlated with chiller temperature drops?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.payload.at("left").get<std::string>(), "ahu");
    EXPECT_EQ(a.payload.at("right").get<std::string>(), "chiller");
    EXPECT_GT(a.payload.at("co_occurrences").get<std::size_t>(), 0u);
}

TEST(Handlers, OptimizationProducesAFeasibleFront) {
    auto a = fixture_router().answer({"Schedule maintenance minimizing downtime and cost"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "maintenance-optimization");
    EXPECT_TRUE(a.payload.at("feasible").get<bool>());
    const auto& front = a.payload.at("front");
    ASSERT_GE(front.size(), 1u);
    ASSERT_EQ(front[0].at("assignments").size(), 11u);
    for (const auto& assignment : front[0].at("assignments")) {
        const auto start = assignment.at("start_hour").get<std::int64_t>();
        EXPECT_GE(start, 0);
        EXPECT_LT(start, 168);
    }
}

TEST(Handlers, FmsrMapsModeToSensorsAndBack) {
    auto sensors = fixture_router().answer({"Which sensors can detect Bearing Wear?"});
    EXPECT_EQ(sensors.trace, "fmsr-mapping");
    EXPECT_EQ(sensors.payload.at("rows").size(), 22u);
    EXPECT_NE(sensors.text.find("22 sensors can detect Bearing Wear"), std::string::npos);

    auto modes = fixture_router().answer({"What failure modes can Chiller 6 detect?"});
    EXPECT_EQ(modes.trace, "fmsr-mapping");
    EXPECT_EQ(modes.payload.at("rows").size(), 12u);
}

TEST(Handlers, IotStatusListsSensorsOfOneAsset) {
    auto a = fixture_router().answer({"What sensors does Chiller 6 have?"});
    EXPECT_EQ(a.tier, Tier::Deterministic);
    EXPECT_EQ(a.trace, "iot-status");
    EXPECT_EQ(a.text, "10 sensors on Chiller 6.");
    const auto& rows = a.payload.at("rows");
    ASSERT_EQ(rows.size(), 10u);
    std::string prev;
    for (const auto& row : rows) {
        const auto id = row[0].get<std::string>();
        EXPECT_GT(id, prev);
        prev = id;
    }
}

TEST(Handlers, EquipmentInventoryListing) {
    auto a = fixture_router().answer({"List all equipment"});
    EXPECT_EQ(a.trace, "iot-status");
    EXPECT_EQ(a.payload.at("rows").size(), 11u);
}

// every scalar in a deterministic table answer must exist somewhere in the
// graph; handlers report data, they do not invent it
TEST(Handlers, TableCellsAreTraceableToGraphProperties) {
    const PropertyGraph& g = fixture().graph;
    std::set<std::string> texts;
    std::set<double> numbers;
    for (const auto& [id, node] : g.nodes()) {
        for (const auto& [key, value] : node.properties) {
            if (value.is_text()) texts.insert(value.text());
            if (value.is_numeric()) numbers.insert(value.as_double());
            if (value.is_time()) texts.insert(value.time().to_iso8601());
        }
    }

    for (const std::string question :
         {std::string("What sensors does Chiller 6 have?"),
          std::string("Show work orders for Chiller 6 in 2019")}) {
        auto a = fixture_router().answer({question});
        ASSERT_EQ(a.tier, Tier::Deterministic) << question;
        for (const auto& row : a.payload.at("rows")) {
            for (const auto& cell : row) {
                if (cell.is_string())
                    EXPECT_TRUE(texts.count(cell.get<std::string>())) << cell;
                else if (cell.is_number())
                    EXPECT_TRUE(numbers.count(cell.get<double>())) << cell;
            }
        }
    }
}

TEST(Handlers, AnswerEnvelopeHasExactlyTheWireKeys) {
    auto a = fixture_router().answer({"How many events for CWC04009 in 2019?"});
    auto envelope = answer_envelope(a);
    ASSERT_EQ(envelope.size(), 5u);
    EXPECT_TRUE(envelope.contains("answer"));
    EXPECT_EQ(envelope.at("tier").get<std::string>(), "deterministic");
    EXPECT_EQ(envelope.at("trace").get<std::string>(), "event-count");
    EXPECT_GE(envelope.at("latency_ms").get<double>(), 0.0);
    EXPECT_TRUE(envelope.contains("payload"));
}

TEST(Handlers, DeterministicAnswersAreFast) {
    auto a = fixture_router().answer({"How many events for CWC04009 in 2019?"});
    EXPECT_LT(a.latency_ms, 150.0);
}
