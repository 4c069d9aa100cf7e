#pragma once

// Entity grounding for handler parameter extraction. Every Equipment node
// gets a small alias table built from its name, its external id, and its
// class code, so "CH06", "Chiller-6" and "chiller 6" all resolve to the same
// node without any model call. Matches are word-bounded substring hits in
// the lowercased question; longer aliases win overlapping shorter ones.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "assetgraph/graph.hpp"

namespace assetgraph::router {

inline std::string ascii_lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

class EntityResolver {
public:
    explicit EntityResolver(const PropertyGraph& graph) {
        for (NodeId id : graph.nodes_by_label("Equipment")) {
            const Node& node = graph.node(id);
            const std::string name = text_prop(node, "name");
            const std::string ext = text_prop(node, "equipment_id");
            const std::string cls = text_prop(node, "iso14224_class");
            for (const auto& alias : aliases_for(name, ext, cls))
                aliases_[alias] = id;
            if (!name.empty()) {
                const std::string head = first_word(ascii_lower(name));
                if (!head.empty()) classes_[head].push_back(id);
            }
        }
        for (auto& [token, members] : classes_) std::sort(members.begin(), members.end());

        for (NodeId id : graph.nodes_by_label("FailureMode")) {
            const std::string name = text_prop(graph.node(id), "name");
            if (!name.empty()) failure_modes_[ascii_lower(name)] = id;
        }
    }

    // distinct equipment in order of first appearance
    std::vector<NodeId> mentions(const std::string& text) const {
        const std::string hay = ascii_lower(text);
        std::map<NodeId, std::size_t> first_pos;
        std::map<NodeId, std::size_t> match_len;
        for (const auto& [alias, id] : aliases_) {
            const auto pos = bounded_find(hay, alias);
            if (!pos) continue;
            auto it = first_pos.find(id);
            // keep the longest alias; earlier position breaks length ties
            if (it == first_pos.end() || alias.size() > match_len[id] ||
                (alias.size() == match_len[id] && *pos < it->second)) {
                first_pos[id] = *pos;
                match_len[id] = alias.size();
            }
        }
        std::vector<std::pair<std::size_t, NodeId>> ordered;
        for (const auto& [id, pos] : first_pos) ordered.push_back({pos, id});
        std::sort(ordered.begin(), ordered.end());
        std::vector<NodeId> out;
        for (const auto& [pos, id] : ordered) out.push_back(id);
        return out;
    }

    std::optional<NodeId> first(const std::string& text) const {
        auto all = mentions(text);
        if (all.empty()) return std::nullopt;
        return all.front();
    }

    // class tokens ("chiller", "ahu", ...) present in the text, in order of
    // appearance, each with its member equipment
    std::vector<std::pair<std::string, std::vector<NodeId>>>
    class_mentions(const std::string& text) const {
        const std::string hay = ascii_lower(text);
        std::vector<std::pair<std::size_t, std::string>> ordered;
        for (const auto& [token, members] : classes_) {
            auto pos = bounded_find(hay, token);
            if (!pos) pos = bounded_find(hay, token + "s");
            if (pos) ordered.push_back({*pos, token});
        }
        std::sort(ordered.begin(), ordered.end());
        std::vector<std::pair<std::string, std::vector<NodeId>>> out;
        for (const auto& [pos, token] : ordered) out.push_back({token, classes_.at(token)});
        return out;
    }

    std::optional<NodeId> failure_mode(const std::string& text) const {
        const std::string hay = ascii_lower(text);
        std::optional<NodeId> best;
        std::size_t best_len = 0;
        for (const auto& [name, id] : failure_modes_) {
            if (name.size() > best_len && hay.find(name) != std::string::npos) {
                best = id;
                best_len = name.size();
            }
        }
        return best;
    }

private:
    static std::string text_prop(const Node& node, const std::string& key) {
        const Scalar* v = node.property(key);
        return v && v->is_text() ? v->text() : std::string();
    }

    static std::string first_word(const std::string& s) {
        const auto cut = s.find_first_of(" -_");
        return cut == std::string::npos ? s : s.substr(0, cut);
    }

    static bool word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    }

    static std::optional<std::size_t> bounded_find(const std::string& hay,
                                                   const std::string& needle) {
        if (needle.empty()) return std::nullopt;
        for (std::size_t pos = hay.find(needle); pos != std::string::npos;
             pos = hay.find(needle, pos + 1)) {
            const bool left_ok = pos == 0 || !word_char(hay[pos - 1]);
            const std::size_t end = pos + needle.size();
            const bool right_ok = end == hay.size() || !word_char(hay[end]);
            if (left_ok && right_ok) return pos;
        }
        return std::nullopt;
    }

    // "Chiller 6" + class "CH" -> chiller 6, chiller-6, chiller6, ch06, ch6
    static std::set<std::string> aliases_for(const std::string& name, const std::string& ext,
                                             const std::string& cls) {
        std::set<std::string> out;
        if (!ext.empty()) out.insert(ascii_lower(ext));
        if (name.empty()) return out;

        const std::string base = ascii_lower(name);
        out.insert(base);
        std::string hyphen = base, compact;
        std::replace(hyphen.begin(), hyphen.end(), ' ', '-');
        out.insert(hyphen);
        for (char c : base)
            if (c != ' ' && c != '-') compact.push_back(c);
        out.insert(compact);

        std::string digits;
        for (char c : base)
            if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
        if (!cls.empty() && !digits.empty()) {
            const std::string code = ascii_lower(cls);
            out.insert(code + digits);
            out.insert(code + "-" + digits);
            if (digits.size() == 1) {
                out.insert(code + "0" + digits);
                out.insert(code + "-0" + digits);
            }
        }
        return out;
    }

    std::map<std::string, NodeId> aliases_;
    std::map<std::string, std::vector<NodeId>> classes_;
    std::map<std::string, NodeId> failure_modes_;
};

// strips work-order tokens first so WO-2024-0042 never reads as a year
inline std::optional<int> extract_year(const std::string& text) {
    static const std::regex wo(R"([Ww][Oo]-[0-9][0-9-]*)");
    const std::string scrubbed = std::regex_replace(text, wo, " ");
    static const std::regex year(R"((^|[^0-9A-Za-z])((?:19|20)[0-9]{2})($|[^0-9A-Za-z]))");
    std::smatch m;
    if (!std::regex_search(scrubbed, m, year)) return std::nullopt;
    return std::stoi(m[2].str());
}

inline std::optional<std::string> extract_work_order(const std::string& text) {
    static const std::regex wo(R"([Ww][Oo]-[0-9][0-9-]*[0-9])");
    std::smatch m;
    if (!std::regex_search(text, m, wo)) return std::nullopt;
    std::string token = m[0].str();
    token[0] = 'W';
    token[1] = 'O';
    return token;
}

} // namespace assetgraph::router
