#pragma once

#include <stdexcept>
#include <string>

namespace bhq {

// Parameter/invariant violations at construction or validation time.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested particle number does not fit in the truncated Hilbert space.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative solver exhausted its iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// R/t lies outside the cone where the stationary-phase equation has a root.
struct NoStationaryPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stationary point sits at a curvature zero (cone edge); the asymptotics break down.
struct SingularCurvature : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-bond discarded weight exceeded the configured hard-fail threshold.
struct TruncationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No map row carries signal above the noise floor.
struct EmptySignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer points than a linear fit with standard errors requires.
struct InsufficientPoints : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration, map, or manifest file.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bhq
