#pragma once

#include <stdexcept>
#include <string>

namespace spindyn {

// Unrecoverable numerical breakdown: step-size underflow, tangent-vector
// overflow, failed eigensolve.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad run configuration (unknown key, out-of-range parameter, unparseable file).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spindyn
