#pragma once

// Gap-driven enrichment. A question about an entity the graph does not
// hold asks the LLM client for CREATE statements describing the missing
// subgraph; statements are validated one by one, valid ones materialize
// with LlmDerived provenance, and the outcome is cached write-once per
// gap key so the client is consulted at most once per gap.

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "assetgraph/cypher/executor.hpp"
#include "assetgraph/cypher/parser.hpp"
#include "assetgraph/error.hpp"
#include "assetgraph/gak/gap.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/llm/client.hpp"
#include "assetgraph/router/router.hpp"
#include "assetgraph/scalar.hpp"
#include "assetgraph/vector/embedding.hpp"
#include "assetgraph/vector/hnsw.hpp"

namespace assetgraph::gak {

enum class EnrichmentStatus { Materialized, Partial, Rejected };

inline const char* status_name(EnrichmentStatus s) {
    switch (s) {
        case EnrichmentStatus::Materialized: return "materialized";
        case EnrichmentStatus::Partial: return "partial";
        case EnrichmentStatus::Rejected: return "rejected";
    }
    return "rejected";
}

inline std::optional<EnrichmentStatus> status_from(const std::string& name) {
    if (name == "materialized") return EnrichmentStatus::Materialized;
    if (name == "partial") return EnrichmentStatus::Partial;
    if (name == "rejected") return EnrichmentStatus::Rejected;
    return std::nullopt;
}

struct RejectedStatement {
    std::string statement;
    std::string error;
};

// Immutable once cached. Statements are kept verbatim so the record is a
// complete audit trail of what the model proposed and what was applied.
struct EnrichmentRecord {
    std::uint64_t id = 0;
    std::string gap_key;
    std::vector<std::string> statements;
    std::vector<RejectedStatement> rejected;
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    Timestamp created_at{0};
    EnrichmentStatus status = EnrichmentStatus::Rejected;

    nlohmann::json to_json() const {
        nlohmann::json rej = nlohmann::json::array();
        for (const auto& r : rejected)
            rej.push_back({{"statement", r.statement}, {"error", r.error}});
        nlohmann::json nids = nlohmann::json::array();
        for (NodeId n : nodes) nids.push_back(PropertyGraph::external_id(n));
        nlohmann::json eids = nlohmann::json::array();
        for (EdgeId e : edges) eids.push_back(PropertyGraph::external_id(e));
        return {{"kind", "enrichment"}, {"id", id},           {"key", gap_key},
                {"statements", statements}, {"rejected", rej}, {"nodes", nids},
                {"edges", eids},         {"at", created_at.to_iso8601()},
                {"status", status_name(status)}};
    }

    static EnrichmentRecord from_json(const nlohmann::json& j) {
        auto parse_id = [](const std::string& s) -> std::uint64_t {
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size())
                throw ValidationError("enrichment record: bad id '" + s + "'");
            return v;
        };
        EnrichmentRecord rec;
        try {
            rec.id = j.at("id").get<std::uint64_t>();
            rec.gap_key = j.at("key").get<std::string>();
            for (const auto& s : j.at("statements")) rec.statements.push_back(s.get<std::string>());
            for (const auto& r : j.at("rejected"))
                rec.rejected.push_back({r.at("statement").get<std::string>(),
                                        r.at("error").get<std::string>()});
            for (const auto& n : j.at("nodes")) rec.nodes.push_back(parse_id(n.get<std::string>()));
            for (const auto& e : j.at("edges")) rec.edges.push_back(parse_id(e.get<std::string>()));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("enrichment record: ") + e.what());
        }
        auto at = Timestamp::parse(j.value("at", ""));
        if (!at) throw ValidationError("enrichment record: bad timestamp");
        rec.created_at = *at;
        auto st = status_from(j.value("status", ""));
        if (!st) throw ValidationError("enrichment record: unknown status");
        rec.status = *st;
        return rec;
    }
};

// Write-once per key: a second insert under the same key is a logic error.
class SemanticCache {
public:
    const EnrichmentRecord* find(const std::string& key) const {
        auto it = records_.find(key);
        return it == records_.end() ? nullptr : &it->second;
    }

    const EnrichmentRecord& insert(EnrichmentRecord rec) {
        auto [it, fresh] = records_.emplace(rec.gap_key, std::move(rec));
        if (!fresh)
            throw ValidationError("enrichment cache already holds key '" + it->first + "'");
        return it->second;
    }

    std::size_t size() const { return records_.size(); }
    const std::map<std::string, EnrichmentRecord>& records() const { return records_; }

    // Serialized into the snapshot's auxiliary records so "runs once per
    // gap" holds across process lifetimes.
    std::vector<nlohmann::json> aux_records() const {
        std::vector<nlohmann::json> out;
        out.reserve(records_.size());
        for (const auto& [key, rec] : records_) out.push_back(rec.to_json());
        return out;
    }

    static SemanticCache from_aux(const std::vector<nlohmann::json>& aux) {
        SemanticCache cache;
        for (const auto& rec : aux) {
            if (!rec.is_object() || rec.value("kind", "") != "enrichment") continue;
            cache.insert(EnrichmentRecord::from_json(rec));
        }
        return cache;
    }

private:
    std::map<std::string, EnrichmentRecord> records_;
};

// Deterministic bytes per gap key; doubles as the stub playbook key.
inline std::string enrichment_prompt(const std::string& gap_key) {
    return "An industrial asset knowledge graph has no entry for: " + gap_key +
           "\n\nReply with Cypher CREATE statements only, one statement per line, that add:\n"
           "- one (:Equipment {name: ..., equipment_id: ...}) node for this equipment type\n"
           "- (:Sensor {sensor_id: ..., type: ...}) nodes for its typical detecting sensor "
           "types, attached with (equipment)-[:HAS_SENSOR]->(sensor) edges\n"
           "- (:FailureMode {name: ...}) nodes for its typical failure modes, attached with "
           "(sensor)-[:MONITORS]->(failure mode) edges\n"
           "Bind a variable the first time an entity appears and reuse it inside the same "
           "statement to attach edges. Do not use MATCH.";
}

// Query-shaped lines (fence stripped); prose is ignored, and a MATCH line
// is kept so it can be rejected with a reason rather than silently lost.
inline std::vector<std::string> extract_statements(const std::string& completion) {
    std::string body = completion;
    auto fence = body.find("```");
    if (fence != std::string::npos) {
        auto start = body.find('\n', fence);
        if (start != std::string::npos) {
            auto end = body.find("```", start);
            if (end != std::string::npos) body = body.substr(start + 1, end - start - 1);
        }
    }
    std::vector<std::string> out;
    std::istringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string t = line.substr(b, e - b + 1);
        std::string head = t.substr(0, 7);
        for (auto& c : head) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (head.rfind("CREATE ", 0) == 0 || head.rfind("MATCH ", 0) == 0) out.push_back(t);
    }
    return out;
}

struct EnrichOptions {
    double temperature = 0.0;
    std::size_t max_tokens = 1024;
    // Fixed timestamp for reproducible records; wall clock when unset.
    std::optional<Timestamp> now;
    // When present, new FailureMode nodes get an embedding property and an
    // index entry, keeping the similarity handler usable on enriched data.
    vec::EmbeddingProvider* embedder = nullptr;
    vec::HnswIndex* index = nullptr;
};

inline const EnrichmentRecord& enrich(const std::string& gap_key, llm::LlmClient& client,
                                      PropertyGraph& graph, SemanticCache& cache,
                                      const EnrichOptions& opts = {}) {
    if (const EnrichmentRecord* hit = cache.find(gap_key)) return *hit;

    auto completion = client.complete(enrichment_prompt(gap_key), opts.temperature,
                                      opts.max_tokens);
    EnrichmentRecord rec;
    rec.id = static_cast<std::uint64_t>(cache.size()) + 1;
    rec.gap_key = gap_key;
    rec.created_at = opts.now ? *opts.now
                              : Timestamp{std::chrono::duration_cast<std::chrono::seconds>(
                                              std::chrono::system_clock::now().time_since_epoch())
                                              .count()};

    const auto candidates = extract_statements(completion.text);
    if (candidates.empty())
        rec.rejected.push_back({"", "completion contained no CREATE statements"});
    for (const auto& statement : candidates) {
        try {
            auto q = cypher::parse(statement);
            if (!q.is_create()) throw ValidationError("statement is not a CREATE");
            // validate() runs a full static check first, so a statement
            // either applies completely or not at all.
            auto created = cypher::execute_create(q, graph, Provenance::LlmDerived);
            rec.statements.push_back(statement);
            rec.nodes.insert(rec.nodes.end(), created.nodes.begin(), created.nodes.end());
            rec.edges.insert(rec.edges.end(), created.edges.begin(), created.edges.end());
        } catch (const cypher::ParseError& e) {
            rec.rejected.push_back({statement, e.what()});
        } catch (const ValidationError& e) {
            rec.rejected.push_back({statement, e.what()});
        }
    }

    if (opts.embedder) {
        std::vector<NodeId> fresh_modes;
        std::vector<std::string> texts;
        for (NodeId id : rec.nodes) {
            const Node& n = graph.node(id);
            if (!n.has_label("FailureMode") || n.property("embedding")) continue;
            fresh_modes.push_back(id);
            const Scalar* name = n.property("name");
            texts.push_back(name ? name->render() : PropertyGraph::external_id(id));
        }
        if (!fresh_modes.empty()) {
            auto vectors = opts.embedder->embed_batch(texts);
            for (std::size_t i = 0; i < fresh_modes.size(); ++i) {
                graph.set_property(fresh_modes[i], "embedding",
                                   Scalar(vec::embedding_to_text(vectors[i])));
                if (opts.index) opts.index->insert(fresh_modes[i], vectors[i]);
            }
        }
    }

    rec.status = rec.statements.empty()
                     ? EnrichmentStatus::Rejected
                     : (rec.rejected.empty() ? EnrichmentStatus::Materialized
                                             : EnrichmentStatus::Partial);
    return cache.insert(std::move(rec));
}

// Router tier backend. Enrichment runs (or is recalled from cache), then
// the question re-enters a fresh router restricted to the deterministic
// and NLQ tiers; the final answer keeps the gak tier and links the record.
struct GakTierConfig {
    PropertyGraph& graph;
    SemanticCache& cache;
    llm::LlmClient& client;
    EnrichOptions options{};
    // Optional NLQ backend for the re-query.
    std::function<std::optional<router::Answer>(const router::Question&)> nlq{};
};

inline std::function<std::optional<router::Answer>(const router::Question&)>
gak_tier(GakTierConfig cfg) {
    return [cfg](const router::Question& q) -> std::optional<router::Answer> {
        std::string key;
        if (q.category_hint && !q.category_hint->empty())
            key = *q.category_hint;
        else if (auto gap = knowledge_gap(q.text, cfg.graph))
            key = *gap;
        if (key.empty()) return std::nullopt;

        const EnrichmentRecord& rec = enrich(key, cfg.client, cfg.graph, cfg.cache, cfg.options);
        const std::string tag = "enrichment:" + std::to_string(rec.id);
        if (rec.status == EnrichmentStatus::Rejected) {
            router::Answer a;
            a.tier = router::Tier::Refused;
            a.text = "Enrichment for '" + key + "' was rejected; the graph is unchanged.";
            a.trace = tag + " rejected";
            a.payload = rec.to_json();
            return a;
        }

        router::Router fresh(cfg.graph);
        if (cfg.nlq) fresh.set_nlq(cfg.nlq);
        router::Answer a = fresh.answer({q.text, std::nullopt, std::nullopt});
        if (a.tier != router::Tier::Refused) a.tier = router::Tier::Gak;
        a.trace = a.trace.empty() ? tag : tag + "; " + a.trace;
        if (a.payload.is_object()) a.payload["enrichment_id"] = rec.id;
        return a;
    };
}

} // namespace assetgraph::gak
