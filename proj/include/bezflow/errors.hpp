#pragma once

#include <stdexcept>
#include <string>

namespace bezflow {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition or invalid argument value.
struct ArgumentError : Error {
    using Error::Error;
};

// Malformed input file or stream (PGM, JSON, CSV).
struct FormatError : Error {
    using Error::Error;
};

// Singular interpolation configuration (duplicate collocation nodes, ...).
struct SingularError : Error {
    using Error::Error;
};

// Samples that should describe a continuous curve disagree at a shared node.
struct DiscontinuityError : Error {
    using Error::Error;
};

// Degenerate geometric configuration: zero tangent at a node, zero-length
// curve, gradient evaluated at its singular point.
struct DegenerateError : Error {
    using Error::Error;
};

// Non-finite values where finite data is required.
struct DataError : Error {
    using Error::Error;
};

} // namespace bezflow
