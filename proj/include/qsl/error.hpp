#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

enum class ErrorKind {
    NonSquare,
    DimensionMismatch,
    DefectiveMatrix,
    Degenerate,
    NoBracket,
    ZeroState,
    Underflow,
    NegativeRadicand,
    ZeroBandwidth,
    BadOrdering,
    DenominatorSignFlip,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qsl
