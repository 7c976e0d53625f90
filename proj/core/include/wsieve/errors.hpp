#pragma once

#include <stdexcept>
#include <string>

namespace wsieve {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside a tabulated/configured range; message names the limit.
struct OutOfRangeError : Error {
    using Error::Error;
};

// A configured capacity (j_max, dimension cap, ...) was exceeded.
struct CapacityError : Error {
    using Error::Error;
};

// Grid refinement failed to stabilize within the allowed passes.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, double last_delta)
        : Error(msg), last_sup_delta(last_delta) {}
    double last_sup_delta;
};

// Two tabulations that should agree disagree beyond tolerance.
struct InternalInconsistencyError : Error {
    using Error::Error;
};

// A bound route was invoked on a weight spec that does not admit it.
struct RoutePreconditionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Adaptive subdivision ran out of cell budget; carries the partial estimate.
struct BudgetExceededError : Error {
    BudgetExceededError(const std::string& msg, double value, double error)
        : Error(msg), partial_value(value), partial_error(error) {}
    double partial_value;
    double partial_error;
};

}  // namespace wsieve
