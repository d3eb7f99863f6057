#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace henon {

enum class ErrorKind {
    ConstraintViolation,
    DomainError,
    ParseError,
    GridMismatch,
    NotProportional,
    NotASyncRoot,
    SymmetryBreakingRegime,
    BlowUp,
    NoConvergence,
    TailNotResolved,
    NoPositiveRoot,
    GridTooCoarse,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Validation errors map to CLI exit code 2, numerical failures to 3.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace henon
