#pragma once

#include <stdexcept>
#include <string>

namespace ck {

// Bad user input: malformed files, dimension mismatches, violated preconditions.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant (e.g. a sequence that must be exact is not).
// Reaching this is a bug, never a user mistake.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace ck
