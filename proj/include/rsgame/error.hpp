#pragma once

#include <stdexcept>
#include <string>

namespace rsgame {

/// Failure categories. Each maps onto one CLI exit status.
enum class ErrorKind {
    validation,        // bad parameters or configuration
    no_convergence,    // Newton stage gave up
    ordering_violated, // converged point leaves a1 < a2 < b1 < b2
    singular_matrix,   // a linear block is numerically singular
    verification,      // candidate value function fails a check
    io,                // file could not be read or written
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Process exit status for an error category.
int exit_code(ErrorKind kind) noexcept;

} // namespace rsgame
