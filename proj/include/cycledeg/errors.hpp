#pragma once

#include <stdexcept>
#include <string>

namespace cycledeg {

// Input exceeds a configured sieve/memory budget or a fixed-width range.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical parameter outside the supported domain (u < 0, tol too small, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation's precondition does not hold. `constraint()` names the
// failing condition in a stable, machine-matchable form.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string constraint, const std::string& detail)
        : std::runtime_error(constraint + ": " + detail), constraint_(std::move(constraint)), detail_(detail) {}

    const std::string& constraint() const noexcept { return constraint_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string constraint_;
    std::string detail_;
};

}  // namespace cycledeg
