#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uli {

/// Category of a domain error. The CLI reports the tag verbatim.
enum class ErrorKind {
    InvalidArgument,
    OutOfRange,
    LevelMismatch,
    SyntaxError,
    ResourceCap,
    NotPx,
    NotIntegral,
    Singular,
    Internal,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::OutOfRange: return "out_of_range";
    case ErrorKind::LevelMismatch: return "level_mismatch";
    case ErrorKind::SyntaxError: return "syntax_error";
    case ErrorKind::ResourceCap: return "resource_cap";
    case ErrorKind::NotPx: return "not_px";
    case ErrorKind::NotIntegral: return "not_integral";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure in the formula grammar. `position` is 1-based and may point
/// one past the end of the input.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(position)),
          position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message)
{
    if (!condition)
        throw Error(kind, message);
}

} // namespace uli
