#pragma once

#include <stdexcept>

namespace nelab {

// Bad sizes, out-of-range parameters, violated preconditions.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Valid request for a combination the engine deliberately does not handle.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hitting-time system has no finite solution (optimum unreachable etc).
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File and serialization failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nelab
