#pragma once

// Internal tokenizer shared by the model and property parsers.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pararob/error.hpp"

namespace pararob::detail {

enum class TokenKind { Ident, Number, Punct, Newline, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Splits text into identifiers, unsigned numbers, and punctuation. '#' starts a comment.
/// Newlines are reported as tokens only when `keep_newlines` is set.
std::vector<Token> tokenize(std::string_view text, bool keep_newlines);

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }
    [[nodiscard]] bool at(TokenKind kind) const { return peek().kind == kind; }
    [[nodiscard]] bool at_punct(std::string_view p) const {
        return peek().kind == TokenKind::Punct && peek().text == p;
    }
    [[nodiscard]] bool at_ident(std::string_view id) const {
        return peek().kind == TokenKind::Ident && peek().text == id;
    }
    bool accept_punct(std::string_view p) {
        if (!at_punct(p)) return false;
        next();
        return true;
    }

    [[noreturn]] void fail(const std::string& message, ErrorCode code = ErrorCode::Syntax) const {
        const Token& t = peek();
        throw SyntaxError(code, t.line, t.column, message);
    }
    [[noreturn]] static void fail_at(const Token& t, const std::string& message,
                                     ErrorCode code = ErrorCode::Syntax) {
        throw SyntaxError(code, t.line, t.column, message);
    }

    const Token& expect_punct(std::string_view p) {
        if (!at_punct(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
        return next();
    }
    const Token& expect_ident(std::string_view what) {
        if (!at(TokenKind::Ident)) fail("expected " + std::string(what) + ", found " + describe(peek()));
        return next();
    }
    void expect_keyword(std::string_view kw) {
        if (!at_ident(kw)) fail("expected '" + std::string(kw) + "', found " + describe(peek()));
        next();
    }

    /// Optionally signed real literal.
    double expect_real();
    /// Optionally signed integer literal.
    std::int64_t expect_int();
    std::uint64_t expect_uint();

    static std::string describe(const Token& t);

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace pararob::detail
