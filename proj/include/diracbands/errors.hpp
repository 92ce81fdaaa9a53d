#pragma once

#include <stdexcept>

namespace diracbands {

// Invalid input data or configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical contract could not be met: eigensolver failure, unresolved
// degeneracy, non-conical fit data and the like (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace diracbands
