#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ropera/error.hpp"

namespace ropera::detail {

// Shortest decimal text that parses back to the same double.
inline std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

inline std::optional<double> parse_number(std::string_view text) {
    if (text.empty() || text.front() == '+') {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

inline std::optional<std::int64_t> parse_integer(std::string_view text) {
    if (text.empty() || text.front() == '+') {
        return std::nullopt;
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

struct Token {
    std::string text;     // unescaped content
    std::size_t column;   // 1-based byte column of the first character
};

struct Line {
    std::size_t number;
    std::vector<Token> tokens;
};

inline bool is_identifier(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) {
        return false;
    }
    for (char c : name) {
        if (!alpha(c) && !digit(c)) {
            return false;
        }
    }
    return true;
}

// Splits source into non-empty logical lines. Tokens are whitespace separated;
// a double-quoted run (with \\ \" \n \t \r escapes) may appear anywhere in a
// token and does not split. A '#' that begins a token starts a comment; inside
// a token (palette=#E8859B) it is ordinary text.
inline std::vector<Line> tokenize(std::string_view source) {
    std::vector<Line> lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        std::size_t eol = source.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = source.size();
        }
        std::string_view raw = source.substr(pos, eol - pos);
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.remove_suffix(1);
        }

        Line line{line_no, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            char c = raw[i];
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            if (c == '#') {
                break;
            }
            Token token{{}, i + 1};
            while (i < raw.size()) {
                c = raw[i];
                if (c == ' ' || c == '\t') {
                    break;
                }
                if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
                    throw ParseError(ErrorCode::Syntax, line_no, i + 1, "control character in input");
                }
                if (c != '"') {
                    token.text.push_back(c);
                    ++i;
                    continue;
                }
                std::size_t open = i;
                ++i;
                bool closed = false;
                while (i < raw.size()) {
                    c = raw[i];
                    if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
                        throw ParseError(ErrorCode::Syntax, line_no, i + 1, "control character in string");
                    }
                    if (c == '"') {
                        closed = true;
                        ++i;
                        break;
                    }
                    if (c == '\\') {
                        if (i + 1 >= raw.size()) {
                            break;
                        }
                        char e = raw[i + 1];
                        switch (e) {
                        case '\\': token.text.push_back('\\'); break;
                        case '"': token.text.push_back('"'); break;
                        case 'n': token.text.push_back('\n'); break;
                        case 't': token.text.push_back('\t'); break;
                        case 'r': token.text.push_back('\r'); break;
                        default:
                            throw ParseError(ErrorCode::Syntax, line_no, i + 1, "unknown escape sequence");
                        }
                        i += 2;
                        continue;
                    }
                    token.text.push_back(c);
                    ++i;
                }
                if (!closed) {
                    throw ParseError(ErrorCode::Syntax, line_no, open + 1, "unterminated string");
                }
            }
            line.tokens.push_back(std::move(token));
        }
        if (!line.tokens.empty()) {
            lines.push_back(std::move(line));
        }
        if (eol == source.size()) {
            break;
        }
        pos = eol + 1;
    }
    return lines;
}

inline std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// Splits "key=value" at the first '='.
inline std::optional<std::pair<std::string_view, std::string_view>> split_key_value(std::string_view token) {
    auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        return std::nullopt;
    }
    return std::pair{token.substr(0, eq), token.substr(eq + 1)};
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace ropera::detail
