#pragma once

// Strict RFC-4180 reader: comma separators, optional CRLF line ends, double
// quotes around fields that need them, doubled quotes as the escape. Field
// content is otherwise untouched; no type coercion happens here.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "assetgraph/error.hpp"

namespace assetgraph::etl {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based source line of each row, for rejection reporting
    std::vector<std::size_t> row_lines;
};

// Throws IoError with `origin` and a line number on structural errors
// (unterminated quote, text after a closing quote). Ragged rows are left for
// the caller to reject record by record.
inline CsvTable parse_csv(std::string_view text, const std::string& origin) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool in_quotes = false;
    bool saw_any = false;

    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        if (table.header.empty() && !saw_any) {
            table.header = std::move(record);
            saw_any = true;
        } else {
            table.rows.push_back(std::move(record));
            table.row_lines.push_back(record_line);
        }
        record.clear();
        record_line = line;
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw IoError(origin + ":" + std::to_string(line) +
                                  ": text after closing quote");
                continue;
            }
            if (c == '\n') ++line;
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw IoError(origin + ":" + std::to_string(line) +
                                  ": quote inside unquoted field");
                in_quotes = true;
                ++i;
                break;
            case ',':
                end_field();
                ++i;
                break;
            case '\r':
                if (i + 1 < n && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                ++line;
                ++i;
                end_record();
                break;
            default:
                field.push_back(c);
                ++i;
                break;
        }
    }
    if (in_quotes)
        throw IoError(origin + ":" + std::to_string(line) + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    return table;
}

inline std::string csv_escape(const std::string& value) {
    bool needs = false;
    for (char c : value)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs = true;
            break;
        }
    if (!needs) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace assetgraph::etl
