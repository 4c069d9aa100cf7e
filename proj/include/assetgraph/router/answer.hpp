#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "assetgraph/cypher/executor.hpp"
#include "assetgraph/scalar.hpp"

namespace assetgraph::router {

enum class Tier { Deterministic, Nlq, Gak, Refused };

inline const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Deterministic: return "deterministic";
        case Tier::Nlq: return "nlq";
        case Tier::Gak: return "gak";
        case Tier::Refused: return "refused";
    }
    return "refused";
}

struct Question {
    std::string text;
    std::optional<Tier> forced_tier;
    std::optional<std::string> category_hint;
};

// tier != Refused implies trace nonempty
struct Answer {
    std::string text;
    nlohmann::json payload;
    Tier tier = Tier::Refused;
    std::string trace;
    double latency_ms = 0.0;
};

inline nlohmann::json scalar_to_json(const Scalar& s) {
    switch (s.kind()) {
        case Scalar::Kind::Text: return s.text();
        case Scalar::Kind::Integer: return s.integer();
        case Scalar::Kind::Float: return s.floating();
        case Scalar::Kind::Boolean: return s.boolean();
        case Scalar::Kind::Time: return s.time().to_iso8601();
    }
    return nullptr;
}

inline nlohmann::json result_table_json(const cypher::ResultTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& cell : row)
            cells.push_back(cell ? scalar_to_json(*cell) : nlohmann::json(nullptr));
        rows.push_back(std::move(cells));
    }
    return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

// wire format of `ask --json`
inline nlohmann::json answer_envelope(const Answer& a) {
    return {{"answer", a.text},
            {"tier", tier_name(a.tier)},
            {"trace", a.trace},
            {"latency_ms", a.latency_ms},
            {"payload", a.payload}};
}

} // namespace assetgraph::router
