#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pararob {

enum class ErrorCode {
    Syntax,
    UnknownParam,
    UnknownSpecies,
    Bounds,
    Explosion,
    Overflow,
    BadThreshold,
    BadInterval,
    QueryNotBoolean,
    NotQuery,
    Atomic,
    Coverage,
    Tiling,
    EpsilonTooTight,
    Unstable,
    OracleCap,
    InvalidArgument,
    Io,
};

/// Stable identifier used in diagnostics, e.g. "E_SYNTAX".
[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace pararob
