#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ropera {

enum class ErrorCode {
    Syntax,
    UnknownSymbol,
    LengthMismatch,
    NonPositiveDuration,
    BadHeader,
    DuplicatePoseName,
    EmptyScore,
    AssetMissing,
    IndexOutOfRange,
    DurationTooShort,
    EmptyTrace,
    InvalidArgument,
    ConnectionRefused,
    PeerNack,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DuplicatePoseName: return "DuplicatePoseName";
    case ErrorCode::EmptyScore: return "EmptyScore";
    case ErrorCode::AssetMissing: return "AssetMissing";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DurationTooShort: return "DurationTooShort";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConnectionRefused: return "ConnectionRefused";
    case ErrorCode::PeerNack: return "PeerNack";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Parse failures carry a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
        : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

} // namespace ropera
