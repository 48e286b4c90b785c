#pragma once

#include <stdexcept>
#include <string>

namespace dvfs {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or documents that violate a stated invariant.
struct validation_error : error {
    using error::error;
};

// Internally inconsistent state (schedule/plan that fails its own contract).
struct integrity_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

} // namespace dvfs
