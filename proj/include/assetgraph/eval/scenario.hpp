#pragma once

// Benchmark scenario files: JSON lines, one scenario per line, validated on
// load. A scenario states a question and what a correct answer must contain,
// as one of four expectation kinds: an exact value, a value set, a free-text
// rubric for an external judge, or the name of a structural check.

#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "assetgraph/error.hpp"

namespace assetgraph::eval {

enum class ExpectKind { Exact, Set, Rubric, Check };

inline const char* expect_kind_name(ExpectKind k) {
    switch (k) {
        case ExpectKind::Exact: return "exact";
        case ExpectKind::Set: return "set";
        case ExpectKind::Rubric: return "rubric";
        case ExpectKind::Check: return "check";
    }
    return "exact";
}

inline ExpectKind expect_kind_from(const std::string& name) {
    if (name == "exact") return ExpectKind::Exact;
    if (name == "set") return ExpectKind::Set;
    if (name == "rubric") return ExpectKind::Rubric;
    if (name == "check") return ExpectKind::Check;
    throw ValidationError("unknown expectation kind '" + name + "'");
}

struct Expectation {
    ExpectKind kind = ExpectKind::Exact;
    std::string value;                // Exact
    std::vector<std::string> values;  // Set
    std::string rubric;               // Rubric
    std::string check;                // Check

    nlohmann::json to_json() const {
        nlohmann::json j = {{"kind", expect_kind_name(kind)}};
        switch (kind) {
            case ExpectKind::Exact: j["value"] = value; break;
            case ExpectKind::Set: j["values"] = values; break;
            case ExpectKind::Rubric: j["rubric"] = rubric; break;
            case ExpectKind::Check: j["check"] = check; break;
        }
        return j;
    }
};

struct Scenario {
    std::string id;
    std::string category;
    std::string question;
    Expectation expects;
    bool deterministic = true;

    nlohmann::json to_json() const {
        return {{"id", id},
                {"category", category},
                {"question", question},
                {"expects", expects.to_json()},
                {"deterministic", deterministic}};
    }
};

namespace eval_detail {

inline std::string require_text(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty())
        throw ValidationError(std::string("missing or empty '") + key + "'");
    return j.at(key).get<std::string>();
}

inline Expectation parse_expectation(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("'expects' must be an object");
    Expectation e;
    e.kind = expect_kind_from(require_text(j, "kind"));
    switch (e.kind) {
        case ExpectKind::Exact:
            e.value = require_text(j, "value");
            break;
        case ExpectKind::Set: {
            if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
                throw ValidationError("missing or empty 'values'");
            for (const auto& v : j.at("values")) {
                if (!v.is_string() || v.get<std::string>().empty())
                    throw ValidationError("'values' entries must be nonempty strings");
                e.values.push_back(v.get<std::string>());
            }
            break;
        }
        case ExpectKind::Rubric:
            e.rubric = require_text(j, "rubric");
            break;
        case ExpectKind::Check:
            e.check = require_text(j, "check");
            break;
    }
    return e;
}

} // namespace eval_detail

// Reads a suite from JSON-lines text. Whitespace-only lines are skipped; every
// record is validated and errors carry the 1-based record index. Duplicate ids
// are rejected because per-scenario report rows are keyed by id.
inline std::vector<Scenario> parse_scenarios(std::istream& in) {
    std::vector<Scenario> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++record;
        const std::string where = "scenario record " + std::to_string(record) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + "invalid JSON: " + e.what());
        }
        if (!j.is_object()) throw ValidationError(where + "not a JSON object");
        Scenario s;
        try {
            s.id = eval_detail::require_text(j, "id");
            s.category = eval_detail::require_text(j, "category");
            s.question = eval_detail::require_text(j, "question");
            if (!j.contains("expects"))
                throw ValidationError("missing 'expects'");
            s.expects = eval_detail::parse_expectation(j.at("expects"));
            if (!j.contains("deterministic") || !j.at("deterministic").is_boolean())
                throw ValidationError("missing or non-boolean 'deterministic'");
            s.deterministic = j.at("deterministic").get<bool>();
        } catch (const ValidationError& e) {
            throw ValidationError(where + std::string(e.what()));
        }
        if (!seen.insert(s.id).second)
            throw ValidationError(where + "duplicate id '" + s.id + "'");
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Scenario> load_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    return parse_scenarios(in);
}

inline void save_scenarios(const std::vector<Scenario>& suite, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file: " + path);
    for (const auto& s : suite) out << s.to_json().dump() << "\n";
}

} // namespace assetgraph::eval
