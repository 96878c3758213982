#pragma once

#include <stdexcept>
#include <string>

namespace wim {

// Bad user-supplied data: shapes, anchors, counts, files. CLI exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configurable cap was exceeded (basis degree, fiber node budget). CLI exit code 4.
struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency failure; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace wim
