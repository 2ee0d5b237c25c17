#pragma once

#include <stdexcept>
#include <string>

namespace coxdim {

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a configurable size cap would be exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The answer cannot be decided from the data at hand (e.g. truncated ball).
struct IndeterminateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotApplicableError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace coxdim
