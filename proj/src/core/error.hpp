#pragma once

#include <stdexcept>
#include <string>

namespace lbex {

enum class ErrorKind {
    Io,          // file not found, unreadable, unwritable
    Syntax,      // model/experiment/plan-spec text does not parse
    Validation,  // parsed but violates an invariant
    Mismatch,    // objects from different models combined
    Overflow,    // simulation produced NaN/Inf
    Range,       // index or parameter out of range
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace lbex
