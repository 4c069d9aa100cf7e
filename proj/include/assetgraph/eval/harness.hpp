#pragma once

// Suite runner and report assembly. A run drives the router at one forced
// tier over every scenario, scores each answer, and aggregates per category.
// Aggregates are always recomputed from the per-scenario rows, so a report
// can never disagree with its own detail; judge-required rows are counted
// but excluded from pass counts and score averages.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "assetgraph/error.hpp"
#include "assetgraph/eval/scenario.hpp"
#include "assetgraph/eval/score.hpp"
#include "assetgraph/gak/enrich.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/llm/client.hpp"
#include "assetgraph/nlq/pipeline.hpp"
#include "assetgraph/router/router.hpp"

namespace assetgraph::eval {

struct ScenarioRow {
    std::string id;
    std::string category;
    std::string tier;
    std::string trace;
    std::string answer;
    double latency_ms = 0.0;
    ScoreCard card;
};

struct CategoryStat {
    std::string category;
    std::size_t passed = 0;
    std::size_t total = 0;
    std::size_t judge_required = 0;
    double avg_score = 0.0;
    double avg_latency_ms = 0.0;

    bool operator==(const CategoryStat&) const = default;
};

struct SuiteReport {
    std::vector<ScenarioRow> rows;
    std::vector<CategoryStat> categories;  // first-appearance order
    CategoryStat overall;                  // category = "total"

    bool all_passed() const {
        for (const auto& row : rows)
            if (!row.card.judge_required && !row.card.pass) return false;
        return true;
    }
};

inline bool operator==(const ScoreCard& a, const ScoreCard& b) {
    return a.scores == b.scores && a.weights == b.weights && a.total == b.total &&
           a.pass == b.pass && a.judge_required == b.judge_required;
}

inline bool operator==(const ScenarioRow& a, const ScenarioRow& b) {
    return a.id == b.id && a.category == b.category && a.tier == b.tier && a.trace == b.trace &&
           a.answer == b.answer && a.latency_ms == b.latency_ms && a.card == b.card;
}

inline bool operator==(const SuiteReport& a, const SuiteReport& b) {
    return a.rows == b.rows && a.categories == b.categories && a.overall == b.overall;
}

namespace eval_detail {

inline void fold(CategoryStat& stat, const ScenarioRow& row) {
    ++stat.total;
    stat.avg_latency_ms += row.latency_ms;
    if (row.card.judge_required) {
        ++stat.judge_required;
        return;
    }
    if (row.card.pass) ++stat.passed;
    stat.avg_score += row.card.total;
}

inline void finish(CategoryStat& stat) {
    const std::size_t scored = stat.total - stat.judge_required;
    stat.avg_score = scored == 0 ? 0.0 : stat.avg_score / static_cast<double>(scored);
    stat.avg_latency_ms =
        stat.total == 0 ? 0.0 : stat.avg_latency_ms / static_cast<double>(stat.total);
}

} // namespace eval_detail

// pass counts and score averages cover scored rows only; latency covers all
inline void recompute_aggregates(SuiteReport& report) {
    report.categories.clear();
    std::map<std::string, std::size_t> index;
    for (const auto& row : report.rows) {
        auto [it, fresh] = index.try_emplace(row.category, report.categories.size());
        if (fresh) report.categories.push_back({row.category});
        eval_detail::fold(report.categories[it->second], row);
    }
    report.overall = {};
    report.overall.category = "total";
    for (const auto& row : report.rows) eval_detail::fold(report.overall, row);
    for (auto& stat : report.categories) eval_detail::finish(stat);
    eval_detail::finish(report.overall);
}

struct EvalOptions {
    router::Tier tier = router::Tier::Deterministic;
    llm::LlmClient* client = nullptr;      // required for nlq and gak tiers
    gak::SemanticCache* cache = nullptr;   // gak tier; a scratch cache is used when absent
    vec::EmbeddingProvider* embedder = nullptr;  // optional embeddings for enriched modes
    JudgeFn judge;                         // optional rubric judge
    double threshold = kPassThreshold;
};

inline SuiteReport run_suite(const std::vector<Scenario>& suite, PropertyGraph& graph,
                             const EvalOptions& opts = {}) {
    const bool needs_client =
        opts.tier == router::Tier::Nlq || opts.tier == router::Tier::Gak;
    if (needs_client && !opts.client)
        throw ValidationError(std::string("tier '") + router::tier_name(opts.tier) +
                              "' requires a language client");

    router::Router router(graph);
    gak::SemanticCache scratch_cache;
    if (opts.client) {
        router.set_nlq(nlq::nlq_tier(graph, *opts.client));
        gak::EnrichOptions enrich_opts;
        enrich_opts.embedder = opts.embedder;
        router.set_gak(gak::gak_tier({graph, opts.cache ? *opts.cache : scratch_cache,
                                      *opts.client, enrich_opts,
                                      nlq::nlq_tier(graph, *opts.client)}));
    }

    SuiteReport report;
    ScoreEnv env(graph);
    for (const auto& sc : suite) {
        router::Question q{sc.question, opts.tier, std::nullopt};
        const router::Answer a = router.answer(q);
        ScenarioRow row;
        row.id = sc.id;
        row.category = sc.category;
        row.tier = router::tier_name(a.tier);
        row.trace = a.trace;
        row.answer = a.text;
        row.latency_ms = a.latency_ms;
        row.card = score_answer(sc, a, env, opts.judge, opts.threshold);
        report.rows.push_back(std::move(row));
    }
    recompute_aggregates(report);
    return report;
}

// ---- serialization -------------------------------------------------------

namespace eval_detail {

inline nlohmann::json dims_json(const std::array<double, 8>& values) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < values.size(); ++i) j[kDimensionNames[i]] = values[i];
    return j;
}

inline std::array<double, 8> dims_from(const nlohmann::json& j) {
    std::array<double, 8> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!j.contains(kDimensionNames[i]) || !j.at(kDimensionNames[i]).is_number())
            throw ValidationError(std::string("report: missing dimension '") +
                                  kDimensionNames[i] + "'");
        out[i] = j.at(kDimensionNames[i]).get<double>();
    }
    return out;
}

inline nlohmann::json stat_json(const CategoryStat& s) {
    return {{"category", s.category},
            {"passed", s.passed},
            {"total", s.total},
            {"judge_required", s.judge_required},
            {"avg_score", s.avg_score},
            {"avg_latency_ms", s.avg_latency_ms}};
}

inline CategoryStat stat_from(const nlohmann::json& j) {
    CategoryStat s;
    try {
        s.category = j.at("category").get<std::string>();
        s.passed = j.at("passed").get<std::size_t>();
        s.total = j.at("total").get<std::size_t>();
        s.judge_required = j.at("judge_required").get<std::size_t>();
        s.avg_score = j.at("avg_score").get<double>();
        s.avg_latency_ms = j.at("avg_latency_ms").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("report: malformed category stat: ") + e.what());
    }
    return s;
}

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

} // namespace eval_detail

inline nlohmann::json report_to_json(const SuiteReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"id", row.id},
                        {"category", row.category},
                        {"tier", row.tier},
                        {"trace", row.trace},
                        {"answer", row.answer},
                        {"latency_ms", row.latency_ms},
                        {"pass", row.card.pass},
                        {"judge_required", row.card.judge_required},
                        {"total", row.card.total},
                        {"scores", eval_detail::dims_json(row.card.scores)},
                        {"weights", eval_detail::dims_json(row.card.weights)}});
    nlohmann::json categories = nlohmann::json::array();
    for (const auto& stat : report.categories)
        categories.push_back(eval_detail::stat_json(stat));
    return {{"rows", std::move(rows)},
            {"categories", std::move(categories)},
            {"overall", eval_detail::stat_json(report.overall)}};
}

inline SuiteReport report_from_json(const nlohmann::json& j) {
    SuiteReport report;
    try {
        for (const auto& r : j.at("rows")) {
            ScenarioRow row;
            row.id = r.at("id").get<std::string>();
            row.category = r.at("category").get<std::string>();
            row.tier = r.at("tier").get<std::string>();
            row.trace = r.at("trace").get<std::string>();
            row.answer = r.at("answer").get<std::string>();
            row.latency_ms = r.at("latency_ms").get<double>();
            row.card.pass = r.at("pass").get<bool>();
            row.card.judge_required = r.at("judge_required").get<bool>();
            row.card.total = r.at("total").get<double>();
            row.card.scores = eval_detail::dims_from(r.at("scores"));
            row.card.weights = eval_detail::dims_from(r.at("weights"));
            report.rows.push_back(std::move(row));
        }
        for (const auto& c : j.at("categories"))
            report.categories.push_back(eval_detail::stat_from(c));
        report.overall = eval_detail::stat_from(j.at("overall"));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("report: malformed JSON: ") + e.what());
    }
    return report;
}

// aligned per-category table with one trailing total row
inline std::string report_table(const SuiteReport& report) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back({"category", "passed", "total", "avg score", "avg latency ms"});
    auto line = [](const CategoryStat& s) {
        return std::vector<std::string>{
            s.category, std::to_string(s.passed), std::to_string(s.total),
            eval_detail::fixed(s.avg_score, 3), eval_detail::fixed(s.avg_latency_ms, 1)};
    };
    for (const auto& stat : report.categories) grid.push_back(line(stat));
    grid.push_back(line(report.overall));

    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& row : grid)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream out;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            if (c > 0) out << "  ";
            // first column left-aligned, numbers right-aligned
            const std::string& cell = grid[r][c];
            if (c == 0) {
                out << cell << std::string(widths[c] - cell.size(), ' ');
            } else {
                out << std::string(widths[c] - cell.size(), ' ') << cell;
            }
        }
        out << "\n";
        if (r == 0) {
            std::size_t rule = 0;
            for (std::size_t c = 0; c < widths.size(); ++c)
                rule += widths[c] + (c > 0 ? 2 : 0);
            out << std::string(rule, '-') << "\n";
        }
    }
    return out.str();
}

// one row per scenario plus a header
inline std::string report_csv(const SuiteReport& report) {
    std::ostringstream out;
    out << "id,category,tier,pass,judge_required,total,latency_ms";
    for (const char* name : kDimensionNames) out << "," << name;
    out << "\n";
    auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + "\"";
    };
    for (const auto& row : report.rows) {
        out << field(row.id) << "," << field(row.category) << "," << field(row.tier) << ","
            << (row.card.pass ? "true" : "false") << ","
            << (row.card.judge_required ? "true" : "false") << ","
            << eval_detail::fixed(row.card.total, 6) << ","
            << eval_detail::fixed(row.latency_ms, 3);
        for (double score : row.card.scores) out << "," << eval_detail::fixed(score, 6);
        out << "\n";
    }
    return out.str();
}

inline std::string render_report(const SuiteReport& report, const std::string& format) {
    if (format == "json") return report_to_json(report).dump(2) + "\n";
    if (format == "table") return report_table(report);
    if (format == "csv") return report_csv(report);
    throw ValidationError("unknown report format '" + format + "'");
}

inline void write_report(const SuiteReport& report, const std::string& format,
                         const std::string& path) {
    const std::string rendered = render_report(report, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report file: " + path);
    out << rendered;
    if (!out) throw IoError("failed writing report file: " + path);
}

} // namespace assetgraph::eval
