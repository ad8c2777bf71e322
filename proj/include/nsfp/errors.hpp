#pragma once

#include <stdexcept>
#include <string>

namespace nsfp {

/// Raised when a configuration or input violates a structural requirement.
/// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a computation leaves its domain of validity (blow-up,
/// negative density, unresolvable kernel).  The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nsfp
