#include "pararob/error.hpp"

namespace pararob {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Syntax: return "E_SYNTAX";
        case ErrorCode::UnknownParam: return "E_UNKNOWN_PARAM";
        case ErrorCode::UnknownSpecies: return "E_UNKNOWN_SPECIES";
        case ErrorCode::Bounds: return "E_BOUNDS";
        case ErrorCode::Explosion: return "E_EXPLOSION";
        case ErrorCode::Overflow: return "E_OVERFLOW";
        case ErrorCode::BadThreshold: return "E_BAD_THRESHOLD";
        case ErrorCode::BadInterval: return "E_BAD_INTERVAL";
        case ErrorCode::QueryNotBoolean: return "E_QUERY_NOT_BOOLEAN";
        case ErrorCode::NotQuery: return "E_NOT_QUERY";
        case ErrorCode::Atomic: return "E_ATOMIC";
        case ErrorCode::Coverage: return "E_COVERAGE";
        case ErrorCode::Tiling: return "E_TILING";
        case ErrorCode::EpsilonTooTight: return "E_EPSILON_TOO_TIGHT";
        case ErrorCode::Unstable: return "E_UNSTABLE";
        case ErrorCode::OracleCap: return "E_ORACLE_CAP";
        case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
        case ErrorCode::Io: return "E_IO";
    }
    return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(ErrorCode code, std::size_t line, std::size_t column,
                         const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace pararob
