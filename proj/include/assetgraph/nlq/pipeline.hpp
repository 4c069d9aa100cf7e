#pragma once

// Language-to-query pipeline. A question is turned into a prompt carrying
// the live schema, a fixed few-shot corpus, and a single-query constraint;
// the completion is parsed and executed by the query engine; one corrective
// retry is allowed when parsing or validation fails. Answer synthesis sees
// the question and the result table, nothing else.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "assetgraph/cypher/executor.hpp"
#include "assetgraph/cypher/parser.hpp"
#include "assetgraph/error.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/llm/client.hpp"
#include "assetgraph/router/answer.hpp"
#include "assetgraph/schema.hpp"

namespace assetgraph::nlq {

// Completions consisting of this line signal that the question needs a
// similarity search or an algorithm rather than a query. The caller treats
// it as "no answer from this tier", never as an error.
inline constexpr const char* kUnsupportedSentinel = "CALL unsupported";

struct NlqOptions {
    double temperature = 0.0;
    std::size_t max_tokens = 512;
    std::size_t synthesis_max_tokens = 256;
    // Rows shown to the synthesis model; longer tables are cut with a note.
    std::size_t max_rows = 50;
};

struct FewShot {
    std::string question;
    std::string query;
};

// Fixed corpus: seven grammar-covering examples plus the refusal sentinel.
// Every non-sentinel query must parse under the engine grammar; a test
// sweeps the corpus through the parser to keep that true.
inline const std::vector<FewShot>& few_shot_examples() {
    static const std::vector<FewShot> kExamples = {
        {"How many events are recorded for CWC04009 in 2019?",
         "MATCH (e:Event) WHERE e.equipment_id = 'CWC04009' AND e.year = 2019 "
         "RETURN count(e) AS events"},
        {"Which sensors does CWC04005 have?",
         "MATCH (eq:Equipment)-[:HAS_SENSOR]->(s:Sensor) WHERE eq.equipment_id = 'CWC04005' "
         "RETURN s.sensor_id, s.type"},
        {"List all failure modes alphabetically.",
         "MATCH (fm:FailureMode) RETURN fm.name ORDER BY fm.name"},
        {"What distinct sensor types exist?",
         "MATCH (s:Sensor) RETURN DISTINCT s.type ORDER BY s.type"},
        {"Which equipment sits in which location?",
         "MATCH (l:Location)-[:CONTAINS_EQUIPMENT]->(e:Equipment) RETURN l.name, e.name"},
        {"What is the highest event year on record?",
         "MATCH (e:Event) RETURN max(e.year) AS latest"},
        {"Show five work order events.",
         "MATCH (e:Event) WHERE e.kind = 'work_order' RETURN e.equipment_id, e.ts LIMIT 5"},
        {"Which pumps had failures similar to Motor 3?", kUnsupportedSentinel},
    };
    return kExamples;
}

struct NlqPrompt {
    std::string schema_section;
    std::string fewshot_section;
    std::string constraint_section;
    std::string question;

    std::string text() const {
        return schema_section + "\n" + fewshot_section + constraint_section + "\n\nQ: " +
               question + "\nCypher:";
    }
};

// Deterministic: the same schema and question always produce the same bytes.
inline NlqPrompt build_prompt(const SchemaDescriptor& schema, const std::string& question) {
    if (schema.node_properties.empty())
        throw ValidationError("cannot build a prompt from an empty schema");
    NlqPrompt p;
    p.schema_section = "Graph schema:\n" + render_schema(schema);
    std::ostringstream shots;
    shots << "Examples:\n";
    for (const auto& ex : few_shot_examples())
        shots << "Q: " << ex.question << "\nCypher: " << ex.query << "\n";
    p.fewshot_section = shots.str();
    p.constraint_section =
        "Answer with a single Cypher query only. Use only the labels, edge types, and "
        "properties listed in the schema. If the question needs similarity search or an "
        "algorithm instead of a query, reply with exactly: CALL unsupported";
    p.question = question;
    return p;
}

namespace nlq_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string upper(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

inline bool is_sentinel(const std::string& s) {
    return upper(trim(s)) == upper(kUnsupportedSentinel);
}

} // namespace nlq_detail

// First fenced code block if any, else the first line that starts with
// MATCH, CREATE, or CALL. Empty result means no query could be located.
inline std::string extract_cypher(const std::string& completion) {
    auto fence = completion.find("```");
    if (fence != std::string::npos) {
        auto body_start = completion.find('\n', fence);
        if (body_start != std::string::npos) {
            ++body_start;
            auto fence_end = completion.find("```", body_start);
            if (fence_end != std::string::npos)
                return nlq_detail::trim(completion.substr(body_start, fence_end - body_start));
        }
    }
    std::istringstream lines(completion);
    std::string line;
    while (std::getline(lines, line)) {
        std::string t = nlq_detail::trim(line);
        std::string u = nlq_detail::upper(t);
        if (u.rfind("MATCH ", 0) == 0 || u.rfind("CREATE ", 0) == 0 || u.rfind("CALL ", 0) == 0)
            return t;
    }
    return "";
}

// Column-aligned plain text. At most `max_rows` rows are shown; a longer
// table gets an explicit truncation note so the reader knows rows are
// missing. Null cells render as "null".
inline std::string render_table_text(const cypher::ResultTable& table, std::size_t max_rows = 50) {
    const std::size_t shown = std::min(table.rows.size(), max_rows);
    std::vector<std::vector<std::string>> cells;
    cells.reserve(shown);
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
    for (std::size_t r = 0; r < shown; ++r) {
        std::vector<std::string> row;
        row.reserve(table.columns.size());
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& cell = table.rows[r][c];
            row.push_back(cell ? cell->render() : "null");
            width[c] = std::max(width[c], row.back().size());
        }
        cells.push_back(std::move(row));
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << "  ";
            out << row[c];
            if (c + 1 < row.size())
                out << std::string(width[c] - row[c].size(), ' ');
        }
        out << "\n";
    };
    emit(table.columns);
    std::size_t rule = 0;
    for (std::size_t c = 0; c < width.size(); ++c) rule += width[c] + (c ? 2 : 0);
    out << std::string(rule, '-') << "\n";
    for (const auto& row : cells) emit(row);
    if (table.rows.size() > shown)
        out << "(showing first " << shown << " of " << table.rows.size() << " rows)\n";
    return out.str();
}

// The synthesis prompt carries the question and the rendered result table,
// nothing else. Keeping this a pure function lets tests audit it for leaks.
inline std::string synthesis_prompt(const std::string& question, const cypher::ResultTable& table,
                                    std::size_t max_rows = 50) {
    return "Question: " + question + "\n\nQuery result:\n" + render_table_text(table, max_rows) +
           "\nAnswer the question in plain language using only the result above.";
}

// Deterministic rendering used when no synthesis model is available.
inline std::string fallback_answer(const cypher::ResultTable& table) {
    if (table.rows.empty()) return "No matching records.";
    if (table.rows.size() == 1 && table.columns.size() == 1 && table.rows[0][0])
        return table.columns[0] + ": " + table.rows[0][0]->render();
    return std::to_string(table.rows.size()) + " matching records:\n" +
           render_table_text(table, 50);
}

inline std::string synthesize_answer(const std::string& question, const cypher::ResultTable& table,
                                     llm::LlmClient& client, const NlqOptions& opts = {},
                                     std::int64_t* prompt_tokens = nullptr,
                                     std::int64_t* completion_tokens = nullptr) {
    if (table.rows.empty()) return "No matching records.";
    try {
        auto c = client.complete(synthesis_prompt(question, table, opts.max_rows),
                                 opts.temperature, opts.synthesis_max_tokens);
        if (prompt_tokens) *prompt_tokens += c.prompt_tokens;
        if (completion_tokens) *completion_tokens += c.completion_tokens;
        std::string text = nlq_detail::trim(c.text);
        if (!text.empty()) return text;
    } catch (const llm::LlmError&) {
        // fall through to the deterministic rendering
    }
    return fallback_answer(table);
}

struct NlqOutcome {
    // Extracted query per completion round; raw completion when nothing
    // resembling a query was found.
    std::vector<std::string> attempts;
    // Parse or validation message per failed round.
    std::vector<std::string> errors;
    std::optional<cypher::ResultTable> result;
    std::string answer;
    bool unsupported = false;
    std::size_t retries = 0;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    double latency_ms = 0.0;

    bool ok() const { return result.has_value(); }
};

// One generation round, at most one corrective retry, then synthesis.
// The retry fires only for parse and validation failures; empty results
// are answers, not errors. Transport failures propagate as LlmError.
inline NlqOutcome answer_nlq(const std::string& question, const PropertyGraph& graph,
                             llm::LlmClient& client, const NlqOptions& opts = {}) {
    const auto started = std::chrono::steady_clock::now();
    NlqOutcome out;
    auto finish = [&]() -> NlqOutcome& {
        out.latency_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        return out;
    };

    const NlqPrompt prompt = build_prompt(derive_schema(graph), question);
    std::string request = prompt.text();
    for (int round = 0; round < 2; ++round) {
        auto completion = client.complete(request, opts.temperature, opts.max_tokens);
        out.prompt_tokens += completion.prompt_tokens;
        out.completion_tokens += completion.completion_tokens;
        std::string candidate = extract_cypher(completion.text);
        out.attempts.push_back(candidate.empty() ? nlq_detail::trim(completion.text) : candidate);
        if (nlq_detail::is_sentinel(candidate)) {
            out.unsupported = true;
            return finish();
        }
        std::string error;
        if (candidate.empty()) {
            error = "completion contained no Cypher query";
        } else {
            try {
                auto q = cypher::parse(candidate);
                out.result = cypher::execute(q, graph);
                out.answer = synthesize_answer(question, *out.result, client, opts,
                                               &out.prompt_tokens, &out.completion_tokens);
                return finish();
            } catch (const cypher::ParseError& e) {
                error = e.what();
            } catch (const ValidationError& e) {
                error = e.what();
            }
        }
        out.errors.push_back(error);
        if (round == 1) break;
        out.retries = 1;
        request = prompt.text() + " " + out.attempts.back() +
                  "\n\nThat query failed with: " + error +
                  "\nReply with a single corrected Cypher query.\nCypher:";
    }
    out.answer = "The question could not be translated into a valid query.";
    return finish();
}

// Bridges the pipeline into the router's pluggable tier slot. The sentinel
// becomes "no answer" so the router can fall back or refuse; hard failures
// become refusals that keep both error messages in the payload; a dead
// backend becomes a refusal rather than an exception out of the router.
inline std::function<std::optional<router::Answer>(const router::Question&)>
nlq_tier(const PropertyGraph& graph, llm::LlmClient& client, NlqOptions opts = {}) {
    return [&graph, &client, opts](const router::Question& q) -> std::optional<router::Answer> {
        NlqOutcome outcome;
        try {
            outcome = answer_nlq(q.text, graph, client, opts);
        } catch (const llm::LlmError& e) {
            router::Answer a;
            a.tier = router::Tier::Refused;
            a.text = std::string("Language backend unavailable: ") + e.what();
            return a;
        }
        if (outcome.unsupported) return std::nullopt;
        if (!outcome.ok()) {
            router::Answer a;
            a.tier = router::Tier::Refused;
            a.text = outcome.answer;
            a.payload = nlohmann::json{{"errors", outcome.errors}, {"attempts", outcome.attempts}};
            return a;
        }
        router::Answer a;
        a.tier = router::Tier::Nlq;
        a.text = outcome.answer;
        a.trace = outcome.attempts.back();
        a.payload = router::result_table_json(*outcome.result);
        a.payload["retries"] = outcome.retries;
        return a;
    };
}

} // namespace assetgraph::nlq
