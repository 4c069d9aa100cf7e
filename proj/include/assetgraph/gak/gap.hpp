#pragma once

// Knowledge-gap detection. A question that asks for the failure modes of an
// equipment type the graph has never heard of cannot be answered by lookup;
// it is routed to enrichment instead. The gap key is the canonical form of
// the unknown subject and doubles as the cache key for enrichment runs.

#include <cctype>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "assetgraph/graph.hpp"

namespace assetgraph::gak {

// lowercase, singularize each word, collapse runs of whitespace
inline std::string canonical_gap_key(const std::string& phrase) {
    std::string lowered;
    lowered.reserve(phrase.size());
    for (char c : phrase)
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

    std::vector<std::string> words;
    std::string word;
    for (char c : lowered) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!word.empty()) words.push_back(word);
            word.clear();
        } else {
            word.push_back(c);
        }
    }
    if (!word.empty()) words.push_back(word);

    auto singular = [](std::string w) {
        auto ends = [&](const char* suffix) {
            const std::size_t n = std::char_traits<char>::length(suffix);
            return w.size() > n && w.compare(w.size() - n, n, suffix) == 0;
        };
        if (ends("ies")) return w.substr(0, w.size() - 3) + "y";
        if (ends("ches") || ends("shes") || ends("sses") || ends("xes") || ends("zes"))
            return w.substr(0, w.size() - 2);
        if (ends("s") && !ends("ss")) return w.substr(0, w.size() - 1);
        return w;
    };

    std::string key;
    for (auto& w : words) {
        if (!key.empty()) key.push_back(' ');
        key += singular(std::move(w));
    }
    return key;
}

// Matches "failure mode(s) of/for <subject>" and reports the canonical key
// when no Equipment node resolves the subject. A node resolves it when the
// canonical forms overlap in either direction, so "chiller" is covered by
// "Chiller 6" and an enriched "Electric Motor" covers "electric motors".
inline std::optional<std::string> knowledge_gap(const std::string& question,
                                                const PropertyGraph& graph) {
    static const std::regex pattern(
        R"(failure\s+modes?\s+(?:of|for)\s+(?:an?\s+|the\s+)?([A-Za-z][A-Za-z0-9 \-]*))",
        std::regex::icase);
    std::smatch m;
    if (!std::regex_search(question, m, pattern)) return std::nullopt;

    std::string key = canonical_gap_key(m[1].str());
    if (key.empty()) return std::nullopt;

    for (NodeId id : graph.nodes_by_label("Equipment")) {
        const Scalar* name = graph.node(id).property("name");
        if (!name || !name->is_text()) continue;
        const std::string cname = canonical_gap_key(name->text());
        if (cname.empty()) continue;
        if (cname.find(key) != std::string::npos || key.find(cname) != std::string::npos)
            return std::nullopt;
    }
    return key;
}

} // namespace assetgraph::gak
