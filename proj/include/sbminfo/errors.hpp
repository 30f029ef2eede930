#pragma once

#include <stdexcept>
#include <string>

namespace sbminfo {

// Invalid argument to a library operation (out-of-range parameter,
// infeasible model configuration, dimension mismatch).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An iterative method exhausted its budget. Carries the last iterate and
// residual so callers can decide whether the partial answer is usable.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double last_iterate, double residual,
                      long iterations)
        : std::runtime_error(what),
          last_iterate(last_iterate),
          residual(residual),
          iterations(iterations) {}

    double last_iterate;
    double residual;
    long iterations;
};

// Problem size exceeds a hard limit (e.g. exhaustive enumeration bounds).
class capacity_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Object is not in the state the operation requires (e.g. unnormalized posterior).
class state_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Internal numeric consistency failure (non-finite iterate, overshoot beyond
// the roundoff allowance).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what, long iteration = -1)
        : std::runtime_error(what), iteration(iteration) {}

    long iteration;
};

}  // namespace sbminfo
