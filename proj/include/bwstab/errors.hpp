#pragma once

#include <stdexcept>
#include <string>

namespace bwstab {

// Invalid input outside an operation's domain (bad polygon, empty interval,
// division by an interval containing zero, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal consistency condition failed; indicates a bug or a violated
// precondition that validation should have caught.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& msg) : std::logic_error(msg) {}
};

// A structural condition required by a geometric move does not hold for the
// given input (for example, no admissible vertex pair exists).
struct NotApplicable : std::runtime_error {
    explicit NotApplicable(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative optimizer stopped before reaching its convergence target.
// Carries the best value found so far.
struct ApproximationError : std::runtime_error {
    double best_value;
    ApproximationError(const std::string& msg, double best)
        : std::runtime_error(msg), best_value(best) {}
};

}  // namespace bwstab
