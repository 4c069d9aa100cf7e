#pragma once

// Tokenizer for the query language. Positions are 1-based line:column.
// Unknown characters become Unknown tokens so the parser can report them
// with its real expectation set; only an unterminated string is a lexer
// error, because there is no token to hand over.

#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"

namespace assetgraph::cypher {

// Message format is load-bearing: it is echoed into the retry prompt of the
// natural-language tier, so it must stay byte-stable.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t col, const std::string& expected,
               const std::string& found)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": expected " + expected + ", found " + found),
          line_(line),
          col_(col) {}

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::size_t line_;
    std::size_t col_;
};

enum class Tok {
    End,
    Ident,
    Integer,
    Float,
    String,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    Star,
    Dash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Unknown,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;     // raw lexeme; for String, the unescaped value
    std::size_t line = 1;
    std::size_t col = 1;

    std::string upper() const {
        std::string u = text;
        for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return u;
    }
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::String: return "string literal";
        default: return "'" + t.text + "'";
    }
}

// Tokenizes the whole input eagerly; the trailing token is always End.
inline std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k && i < n; ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok kind, std::string lexeme, std::size_t l, std::size_t c) {
        out.push_back({kind, std::move(lexeme), l, c});
    };

    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n') advance(1);
            continue;
        }
        const std::size_t tl = line, tc = col;
        if (c == '\'' || c == '"') {
            const char quote = c;
            advance(1);
            std::string value;
            bool closed = false;
            while (i < n) {
                char d = text[i];
                if (d == '\\' && i + 1 < n) {
                    char e = text[i + 1];
                    advance(2);
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        default: value += e;
                    }
                    continue;
                }
                if (d == quote) {
                    advance(1);
                    closed = true;
                    break;
                }
                value += d;
                advance(1);
            }
            if (!closed)
                throw ParseError(tl, tc, std::string("closing ") + quote, "end of input");
            push(Tok::String, std::move(value), tl, tc);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            bool is_float = false;
            if (j + 1 < n && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                is_float = true;
                ++j;
                while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            std::string lexeme = text.substr(i, j - i);
            advance(j - i);
            push(is_float ? Tok::Float : Tok::Integer, std::move(lexeme), tl, tc);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string lexeme = text.substr(i, j - i);
            advance(j - i);
            push(Tok::Ident, std::move(lexeme), tl, tc);
            continue;
        }
        auto two = [&](char second) { return i + 1 < n && text[i + 1] == second; };
        switch (c) {
            case '(': advance(1); push(Tok::LParen, "(", tl, tc); continue;
            case ')': advance(1); push(Tok::RParen, ")", tl, tc); continue;
            case '[': advance(1); push(Tok::LBracket, "[", tl, tc); continue;
            case ']': advance(1); push(Tok::RBracket, "]", tl, tc); continue;
            case '{': advance(1); push(Tok::LBrace, "{", tl, tc); continue;
            case '}': advance(1); push(Tok::RBrace, "}", tl, tc); continue;
            case ':': advance(1); push(Tok::Colon, ":", tl, tc); continue;
            case ',': advance(1); push(Tok::Comma, ",", tl, tc); continue;
            case '.': advance(1); push(Tok::Dot, ".", tl, tc); continue;
            case '*': advance(1); push(Tok::Star, "*", tl, tc); continue;
            case '-': advance(1); push(Tok::Dash, "-", tl, tc); continue;
            case '=': advance(1); push(Tok::Eq, "=", tl, tc); continue;
            case '<':
                if (two('>')) {
                    advance(2);
                    push(Tok::Ne, "<>", tl, tc);
                } else if (two('=')) {
                    advance(2);
                    push(Tok::Le, "<=", tl, tc);
                } else {
                    advance(1);
                    push(Tok::Lt, "<", tl, tc);
                }
                continue;
            case '>':
                if (two('=')) {
                    advance(2);
                    push(Tok::Ge, ">=", tl, tc);
                } else {
                    advance(1);
                    push(Tok::Gt, ">", tl, tc);
                }
                continue;
            default:
                advance(1);
                push(Tok::Unknown, std::string(1, c), tl, tc);
                continue;
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

} // namespace assetgraph::cypher
