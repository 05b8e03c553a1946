#pragma once

#include <stdexcept>
#include <string>

namespace marcopolo {

// Invalid argument to an operation (bad index, out-of-range reward, ...).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A run cannot be set up as requested (infeasible arm, missing path, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message carries field/line context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented limit was exceeded (enumeration cap, policy cap).
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated internal invariant; signals a bug, not a user error.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace marcopolo
