#include "lexer.hpp"

#include <cctype>
#include <cmath>

namespace pararob::detail {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::string_view kTwoCharPunct[] = {"->", ">=", "<=", "=?"};

}  // namespace

std::vector<Token> tokenize(std::string_view text, bool keep_newlines) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t line_start = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();

    while (i < n) {
        const char c = text[i];
        const std::size_t column = i - line_start + 1;
        if (c == '\n') {
            if (keep_newlines) out.push_back({TokenKind::Newline, text.substr(i, 1), line, column});
            ++i;
            ++line;
            line_start = i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && is_ident_char(text[j])) ++j;
            out.push_back({TokenKind::Ident, text.substr(i, j - i), line, column});
            i = j;
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(text[i + 1]))) {
            std::size_t j = i;
            while (j < n && is_digit(text[j])) ++j;
            if (j < n && text[j] == '.') {
                ++j;
                while (j < n && is_digit(text[j])) ++j;
            }
            if (j < n && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < n && is_digit(text[k])) {
                    while (k < n && is_digit(text[k])) ++k;
                    j = k;
                }
            }
            out.push_back({TokenKind::Number, text.substr(i, j - i), line, column});
            i = j;
            continue;
        }
        bool matched = false;
        if (i + 1 < n) {
            for (auto p : kTwoCharPunct) {
                if (text.substr(i, 2) == p) {
                    out.push_back({TokenKind::Punct, text.substr(i, 2), line, column});
                    i += 2;
                    matched = true;
                    break;
                }
            }
        }
        if (matched) continue;
        if (std::string_view(":@*+-=[],()!&|<>?").find(c) != std::string_view::npos) {
            out.push_back({TokenKind::Punct, text.substr(i, 1), line, column});
            ++i;
            continue;
        }
        throw SyntaxError(ErrorCode::Syntax, line, column,
                          std::string("unexpected character '") + c + "'");
    }
    out.push_back({TokenKind::End, {}, line, i - line_start + 1});
    return out;
}

std::string TokenStream::describe(const Token& t) {
    switch (t.kind) {
        case TokenKind::End: return "end of input";
        case TokenKind::Newline: return "end of line";
        default: return "'" + std::string(t.text) + "'";
    }
}

double TokenStream::expect_real() {
    bool negative = false;
    if (accept_punct("-")) {
        negative = true;
    } else {
        accept_punct("+");
    }
    if (!at(TokenKind::Number)) fail("expected a number, found " + describe(peek()));
    const Token& t = next();
    double value = 0.0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        fail_at(t, "malformed number '" + std::string(t.text) + "'");
    }
    return negative ? -value : value;
}

std::int64_t TokenStream::expect_int() {
    bool negative = false;
    if (accept_punct("-")) {
        negative = true;
    } else {
        accept_punct("+");
    }
    const auto magnitude = expect_uint();
    if (magnitude > static_cast<std::uint64_t>(INT64_MAX)) fail("integer out of range");
    const auto v = static_cast<std::int64_t>(magnitude);
    return negative ? -v : v;
}

std::uint64_t TokenStream::expect_uint() {
    if (!at(TokenKind::Number)) fail("expected an integer, found " + describe(peek()));
    const Token& t = next();
    std::uint64_t value = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        fail_at(t, "expected an integer, found '" + std::string(t.text) + "'");
    }
    return value;
}

}  // namespace pararob::detail
