#pragma once

// Tier dispatch. A question goes to the first matching deterministic
// handler; questions about subjects the graph does not know go to
// enrichment; everything else goes to the NLQ pipeline. The decision is a
// pure function of question text and graph content, so identical questions
// always land in the same place.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "assetgraph/gak/gap.hpp"
#include "assetgraph/graph.hpp"
#include "assetgraph/router/answer.hpp"
#include "assetgraph/router/handlers.hpp"

namespace assetgraph::router {

struct RouteDecision {
    Tier tier = Tier::Nlq;
    std::string handler;  // set when tier == Deterministic
    std::string gap_key;  // set when tier == Gak
};

class Router {
public:
    // a tier backend returns nullopt when it cannot produce any answer
    using TierFn = std::function<std::optional<Answer>(const Question&)>;

    explicit Router(const PropertyGraph& graph) : graph_(graph) {}

    void set_nlq(TierFn fn) { nlq_ = std::move(fn); }
    void set_gak(TierFn fn) { gak_ = std::move(fn); }

    // Rebuilt lazily whenever the graph version moves, so entity aliases
    // and the similarity index pick up enrichment writes. Not safe against
    // concurrent mutation; the store's single-writer contract covers that.
    const RouterContext& context() const {
        if (!ctx_ || ctx_version_ != graph_.version()) {
            ctx_.emplace(graph_);
            ctx_version_ = graph_.version();
        }
        return *ctx_;
    }

    RouteDecision route(const Question& q) const {
        RouteDecision d;
        if (q.text.empty()) {
            d.tier = Tier::Refused;
            return d;
        }
        if (q.forced_tier) {
            d.tier = *q.forced_tier;
            if (d.tier == Tier::Deterministic)
                if (const HandlerSpec* spec = first_match(q.text)) d.handler = spec->name;
            return d;
        }
        if (auto gap = gak::knowledge_gap(q.text, graph_)) {
            d.tier = Tier::Gak;
            d.gap_key = *gap;
            return d;
        }
        if (const HandlerSpec* spec = first_match(q.text)) {
            d.tier = Tier::Deterministic;
            d.handler = spec->name;
            return d;
        }
        d.tier = Tier::Nlq;
        return d;
    }

    Answer answer(const Question& q) const {
        const auto start = std::chrono::steady_clock::now();
        Answer a = dispatch(q);
        a.latency_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        return a;
    }

private:
    const HandlerSpec* first_match(const std::string& text) const {
        for (const auto& spec : handler_catalog())
            if (spec.matches(text)) return &spec;
        return nullptr;
    }

    static Answer refusal(const std::string& reason) {
        Answer a;
        a.tier = Tier::Refused;
        a.text = reason;
        a.payload = nlohmann::json(nullptr);
        return a;
    }

    Answer run_deterministic(const HandlerSpec& spec, const Question& q) const {
        if (auto answer = spec.run(q, context())) {
            answer->tier = Tier::Deterministic;
            answer->trace = spec.name;
            return *answer;
        }
        // pattern fired but a parameter was missing: hand over to NLQ
        Answer a = run_nlq(q);
        a.trace = spec.name + ":extraction-miss" + (a.trace.empty() ? "" : "; " + a.trace);
        return a;
    }

    Answer run_nlq(const Question& q) const {
        if (!nlq_) return refusal("The language-to-query tier is not configured.");
        if (auto a = nlq_(q)) return *a;
        return refusal("The language-to-query tier produced no answer.");
    }

    Answer run_gak(const Question& q, const std::string& gap_key) const {
        if (!gak_) return refusal("The enrichment tier is not configured.");
        Question tagged = q;
        if (!tagged.category_hint) tagged.category_hint = gap_key;
        if (auto a = gak_(tagged)) return *a;
        return refusal("Enrichment produced no answer for '" + gap_key + "'.");
    }

    Answer dispatch(const Question& q) const {
        if (q.text.empty()) return refusal("Cannot answer an empty question.");
        if (q.forced_tier) {
            switch (*q.forced_tier) {
                case Tier::Deterministic: {
                    const HandlerSpec* spec = first_match(q.text);
                    if (!spec) return refusal("No deterministic handler matches.");
                    return run_deterministic(*spec, q);
                }
                case Tier::Nlq: return run_nlq(q);
                case Tier::Gak: {
                    auto gap = gak::knowledge_gap(q.text, graph_);
                    return run_gak(q, gap.value_or(""));
                }
                case Tier::Refused: return refusal("Refused by request.");
            }
        }
        RouteDecision d = route(q);
        switch (d.tier) {
            case Tier::Deterministic: {
                const HandlerSpec* spec = first_match(q.text);
                return run_deterministic(*spec, q);
            }
            case Tier::Gak: return run_gak(q, d.gap_key);
            case Tier::Nlq: return run_nlq(q);
            case Tier::Refused: break;
        }
        return refusal("Cannot answer an empty question.");
    }

    const PropertyGraph& graph_;
    mutable std::optional<RouterContext> ctx_;
    mutable std::uint64_t ctx_version_ = 0;
    TierFn nlq_;
    TierFn gak_;
};

} // namespace assetgraph::router
