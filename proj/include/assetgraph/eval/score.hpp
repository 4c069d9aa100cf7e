#pragma once

// The eight-dimension answer scorer. Every dimension is computed mechanically
// from the scenario, the answer, and the graph, so a score card is a pure
// function of its inputs and repeated scoring is identical. Free-text rubrics
// are the one exception: they need the pluggable judge, and without one the
// scenario is flagged judge-required rather than silently passed or failed.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "assetgraph/eval/scenario.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/router/answer.hpp"
#include "assetgraph/router/handlers.hpp"

namespace assetgraph::eval {

// dimension order is pinned; weights and scores index into it
inline constexpr std::array<const char*, 8> kDimensionNames = {
    "correctness",       "completeness", "relevance",
    "tool_usage",        "efficiency",   "safety",
    "graph_utilization", "semantic_precision"};

inline constexpr double kPassThreshold = 0.7;

struct ScoreCard {
    std::array<double, 8> scores{};
    std::array<double, 8> weights{};
    double total = 0.0;
    bool pass = false;
    bool judge_required = false;
};

// Correctness and completeness carry most of the mass so a wrong answer can
// never pass on style points; failure similarity shifts a quarter of the
// weight onto semantic precision.
inline std::array<double, 8> default_weights() {
    return {0.35, 0.25, 0.05, 0.10, 0.10, 0.10, 0.05, 0.00};
}

inline std::array<double, 8> weights_for(const std::string& category) {
    if (category == "failure-similarity")
        return {0.25, 0.20, 0.05, 0.05, 0.05, 0.10, 0.05, 0.25};
    return default_weights();
}

inline double efficiency_band(double latency_ms) {
    if (latency_ms <= 150.0) return 1.0;
    if (latency_ms <= 2000.0) return 0.7;
    if (latency_ms <= 15000.0) return 0.4;
    return 0.1;
}

// a rubric judge grades the answer in [0,1]
using JudgeFn = std::function<double(const Scenario&, const router::Answer&)>;

namespace score_detail {

inline bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// word-bounded, case-insensitive containment; both sides already lowercased
inline bool contains_value(const std::string& hay, const std::string& needle) {
    if (needle.empty()) return false;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + 1)) {
        const bool left_ok = pos == 0 || !word_char(hay[pos - 1]) || !word_char(needle.front());
        const std::size_t end = pos + needle.size();
        const bool right_ok = end == hay.size() || !word_char(hay[end]) || !word_char(needle.back());
        if (left_ok && right_ok) return true;
    }
    return false;
}

inline double number_or(const nlohmann::json& j, const char* key, double fallback) {
    return j.is_object() && j.contains(key) && j.at(key).is_number()
               ? j.at(key).get<double>()
               : fallback;
}

inline bool nonempty_rows(const router::Answer& a) {
    return a.payload.is_object() && a.payload.contains("rows") &&
           a.payload.at("rows").is_array() && !a.payload.at("rows").empty();
}

inline bool criticality_ranking(const router::Answer& a) {
    if (!a.payload.is_object() || !a.payload.contains("entries")) return false;
    const auto& entries = a.payload.at("entries");
    if (!entries.is_array() || entries.empty()) return false;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
        const double score = number_or(e, "score", -1.0);
        if (score < 0.0 || score > prev) return false;
        prev = score;
        sum += score;
    }
    return std::abs(sum - 1.0) <= 1e-6;
}

inline bool pareto_front(const router::Answer& a) {
    if (!a.payload.is_object()) return false;
    if (!a.payload.contains("feasible") || a.payload.at("feasible") != true) return false;
    if (!a.payload.contains("front") || !a.payload.at("front").is_array() ||
        a.payload.at("front").empty())
        return false;
    const auto& front = a.payload.at("front");
    std::vector<std::pair<double, double>> plans;
    for (const auto& p : front) {
        if (!p.contains("assignments") || !p.at("assignments").is_array() ||
            p.at("assignments").empty())
            return false;
        plans.push_back({number_or(p, "downtime_hours", -1.0), number_or(p, "cost_units", -1.0)});
        if (plans.back().first < 0.0 || plans.back().second < 0.0) return false;
    }
    for (std::size_t i = 0; i < plans.size(); ++i)
        for (std::size_t j = 0; j < plans.size(); ++j) {
            if (i == j) continue;
            const bool dominates = plans[i].first <= plans[j].first &&
                                   plans[i].second <= plans[j].second &&
                                   (plans[i].first < plans[j].first ||
                                    plans[i].second < plans[j].second);
            if (dominates) return false;
        }
    return true;
}

inline bool chronological_events(const router::Answer& a) {
    if (!nonempty_rows(a)) return false;
    std::string prev;
    for (const auto& row : a.payload.at("rows")) {
        if (!row.is_array() || row.empty() || !row.at(0).is_string()) return false;
        const std::string ts = row.at(0).get<std::string>();
        if (ts < prev) return false;  // ISO-8601 sorts lexicographically
        prev = ts;
    }
    return true;
}

inline bool mtbf_defined(const router::Answer& a) {
    if (!a.payload.is_object()) return false;
    if (number_or(a.payload, "mean_gap_hours", -1.0) <= 0.0) return false;
    return number_or(a.payload, "event_count", 0.0) >= 2.0;
}

inline bool correlation_stats(const router::Answer& a) {
    if (!a.payload.is_object()) return false;
    return number_or(a.payload, "co_occurrences", -1.0) >= 1.0 &&
           number_or(a.payload, "left_events", 0.0) >= 1.0 &&
           number_or(a.payload, "right_events", 0.0) >= 1.0 &&
           number_or(a.payload, "window_hours", 0.0) == 24.0;
}

inline bool similarity_matches(const router::Answer& a) {
    if (!a.payload.is_object() || !a.payload.contains("matches")) return false;
    const auto& matches = a.payload.at("matches");
    if (!matches.is_array() || matches.empty()) return false;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& m : matches) {
        const double d = number_or(m, "distance", -1.0);
        if (d < prev) return false;  // nearest first
        prev = d;
    }
    return a.payload.contains("equipment") && a.payload.at("equipment").is_array() &&
           !a.payload.at("equipment").empty();
}

} // namespace score_detail

using CheckFn = std::function<bool(const router::Answer&)>;

// Named structural checks referenced by `check`-kind scenarios. An unknown
// name scores zero (a visibly failing scenario) instead of throwing, so one
// typo cannot abort a whole suite run.
inline const std::map<std::string, CheckFn>& structural_checks() {
    static const std::map<std::string, CheckFn> kChecks = {
        {"non-empty-rows", score_detail::nonempty_rows},
        {"criticality-ranking", score_detail::criticality_ranking},
        {"pareto-front", score_detail::pareto_front},
        {"chronological-events", score_detail::chronological_events},
        {"mtbf-defined", score_detail::mtbf_defined},
        {"correlation-stats", score_detail::correlation_stats},
        {"similarity-matches", score_detail::similarity_matches},
    };
    return kChecks;
}

// Everything the graph could have said: rendered property values, labels and
// edge types as searchable text, plus all numeric property values for
// rounded-decimal grounding. Built once per graph version.
class FabricationLexicon {
public:
    explicit FabricationLexicon(const PropertyGraph& graph) {
        std::ostringstream text;
        for (const auto& [id, node] : graph.nodes()) {
            for (const auto& label : node.labels) text << label << '\n';
            for (const auto& [key, value] : node.properties) {
                text << value.render() << '\n';
                if (value.is_numeric()) pool_.push_back(value.as_double());
            }
        }
        for (const auto& [id, edge] : graph.edges()) {
            text << edge.type << '\n';
            for (const auto& [key, value] : edge.properties) {
                text << value.render() << '\n';
                if (value.is_numeric()) pool_.push_back(value.as_double());
            }
        }
        text_ = router::ascii_lower(text.str());
        std::sort(pool_.begin(), pool_.end());
    }

    bool contains_text(const std::string& lowered) const {
        return text_.find(lowered) != std::string::npos;
    }

    bool has_number_within(double value, double tolerance) const {
        auto it = std::lower_bound(pool_.begin(), pool_.end(), value - tolerance);
        return it != pool_.end() && *it <= value + tolerance;
    }

private:
    std::string text_;
    std::vector<double> pool_;
};

// Lazily rebuilt whenever the graph version moves, so enrichment writes made
// mid-suite are visible to the fabrication check.
class ScoreEnv {
public:
    explicit ScoreEnv(const PropertyGraph& graph) : graph_(graph) {}

    const PropertyGraph& graph() const { return graph_; }

    const FabricationLexicon& lexicon() const {
        if (!lex_ || version_ != graph_.version()) {
            lex_.emplace(graph_);
            version_ = graph_.version();
        }
        return *lex_;
    }

private:
    const PropertyGraph& graph_;
    mutable std::optional<FabricationLexicon> lex_;
    mutable std::uint64_t version_ = 0;
};

namespace score_detail {

// Digit-bearing tokens of length >= 3 from the answer text. Shorter numerics
// (hop counts, window sizes, list cardinalities) are ubiquitous analysis
// parameters and ground too poorly to signal fabrication.
inline std::vector<std::string> fabrication_candidates(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto token_char = [](char c) {
        return word_char(c) || c == '.' || c == '-';
    };
    while (i < text.size()) {
        if (!word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && token_char(text[j])) ++j;
        std::string token = text.substr(i, j - i);
        i = j;
        while (!token.empty() && (token.back() == '.' || token.back() == '-')) token.pop_back();
        if (token.size() < 3) continue;
        if (token.find_first_of("0123456789") == std::string::npos) continue;
        out.push_back(router::ascii_lower(token));
    }
    return out;
}

inline void collect_numbers(const nlohmann::json& j, std::vector<double>& out) {
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array() || j.is_object()) {
        for (const auto& item : j) collect_numbers(item, out);
    }
}

// A decimal token is grounded when some actual number rounds to it.
inline bool rounds_to_token(const std::string& token, const std::vector<double>& locals,
                            const FabricationLexicon& lex) {
    const auto dot = token.find('.');
    if (dot == std::string::npos) return false;
    if (token.find_first_not_of("0123456789.") != std::string::npos) return false;
    if (token.find('.', dot + 1) != std::string::npos) return false;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) return false;
    const int decimals = static_cast<int>(token.size() - dot - 1);
    const double tol = 0.5 * std::pow(10.0, -decimals) + 1e-12;
    for (double v : locals)
        if (std::abs(v - value) <= tol) return true;
    return lex.has_number_within(value, tol);
}

// 1 unless the answer text asserts a value found neither in the payload, the
// question, the trace, nor anywhere in the graph
inline double safety_score(const Scenario& sc, const router::Answer& a, const ScoreEnv& env) {
    const auto candidates = fabrication_candidates(a.text);
    if (candidates.empty()) return 1.0;
    const std::string local = router::ascii_lower(a.payload.dump() + " " + sc.question + " " +
                                                  a.trace);
    std::vector<double> numbers;
    collect_numbers(a.payload, numbers);
    const FabricationLexicon& lex = env.lexicon();
    for (const auto& token : candidates) {
        if (local.find(token) != std::string::npos) continue;
        if (lex.contains_text(token)) continue;
        if (rounds_to_token(token, numbers, lex)) continue;
        return 0.0;
    }
    return 1.0;
}

inline double graph_utilization(const std::string& trace) {
    if (trace.empty()) return 0.0;
    for (const auto& spec : router::handler_catalog())
        if (trace.find(spec.name) != std::string::npos) return 1.0;
    if (trace.find("MATCH") != std::string::npos) return 1.0;  // executed Cypher
    return 0.5;
}

// precision of an explicit equipment claim set against the expected set;
// falls back to correctness when the payload makes no such claim
inline std::optional<double> claim_precision(const Expectation& expect,
                                             const router::Answer& a) {
    if (expect.kind != ExpectKind::Set) return std::nullopt;
    if (!a.payload.is_object() || !a.payload.contains("equipment") ||
        !a.payload.at("equipment").is_array())
        return std::nullopt;
    std::set<std::string> expected;
    for (const auto& v : expect.values) expected.insert(router::ascii_lower(v));
    std::size_t claimed = 0, matched = 0;
    for (const auto& item : a.payload.at("equipment")) {
        if (!item.is_string()) return std::nullopt;
        ++claimed;
        if (expected.count(router::ascii_lower(item.get<std::string>()))) ++matched;
    }
    if (claimed == 0) return 0.0;
    return static_cast<double>(matched) / static_cast<double>(claimed);
}

} // namespace score_detail

inline ScoreCard score_answer(const Scenario& sc, const router::Answer& a, const ScoreEnv& env,
                              const JudgeFn& judge = {}, double threshold = kPassThreshold) {
    ScoreCard card;
    card.weights = weights_for(sc.category);

    const std::string haystack = router::ascii_lower(a.text + " " + a.payload.dump());

    double correctness = 0.0;
    double completeness = 0.0;
    double semantic = 0.0;
    switch (sc.expects.kind) {
        case ExpectKind::Exact: {
            const bool hit =
                score_detail::contains_value(haystack, router::ascii_lower(sc.expects.value));
            correctness = completeness = semantic = hit ? 1.0 : 0.0;
            break;
        }
        case ExpectKind::Set: {
            std::size_t found = 0;
            for (const auto& v : sc.expects.values)
                if (score_detail::contains_value(haystack, router::ascii_lower(v))) ++found;
            const double recall =
                static_cast<double>(found) / static_cast<double>(sc.expects.values.size());
            correctness = completeness = recall;
            semantic = score_detail::claim_precision(sc.expects, a).value_or(recall);
            break;
        }
        case ExpectKind::Check: {
            const auto& checks = structural_checks();
            const auto it = checks.find(sc.expects.check);
            const bool ok = it != checks.end() && it->second(a);
            correctness = completeness = semantic = ok ? 1.0 : 0.0;
            break;
        }
        case ExpectKind::Rubric: {
            if (!judge) {
                card.judge_required = true;
                return card;  // zero card, excluded from mechanical aggregates
            }
            const double grade = std::clamp(judge(sc, a), 0.0, 1.0);
            correctness = completeness = semantic = grade;
            break;
        }
    }

    card.scores[0] = correctness;
    card.scores[1] = completeness;
    card.scores[2] = a.tier == router::Tier::Refused ? 0.0 : 1.0;
    card.scores[3] = a.trace.empty() ? 0.0 : 1.0;
    card.scores[4] = efficiency_band(a.latency_ms);
    card.scores[5] = score_detail::safety_score(sc, a, env);
    card.scores[6] = score_detail::graph_utilization(a.trace);
    card.scores[7] = semantic;

    card.total = 0.0;
    for (std::size_t i = 0; i < card.scores.size(); ++i)
        card.total += card.scores[i] * card.weights[i];
    card.pass = card.total >= threshold;
    return card;
}

} // namespace assetgraph::eval
