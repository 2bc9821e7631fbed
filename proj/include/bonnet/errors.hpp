#pragma once

#include <stdexcept>
#include <string>

namespace bonnet {

// Base type for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid too small for the requested stencil, or mismatched grids.
struct DimensionError : Error {
    using Error::Error;
};

// A value violated a mathematical precondition (e.g. nu <= 0 at a node).
struct DomainError : Error {
    int i = -1, j = -1;
    DomainError(const std::string& msg, int i_, int j_)
        : Error(msg), i(i_), j(j_) {}
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A map or surface failed a rank/regularity requirement.
struct RegularityError : Error {
    using Error::Error;
};

// Chart data violated the conformal-gauge precondition.
struct ConformalityError : Error {
    double defect = 0.0;
    ConformalityError(const std::string& msg, double d) : Error(msg), defect(d) {}
};

// Iterative solve failed; message carries the residual history summary.
struct ConvergenceError : Error {
    using Error::Error;
};

// Frame transport exceeded the per-step drift budget.
struct StepFailureError : Error {
    int i = -1, j = -1;
    StepFailureError(const std::string& msg, int i_, int j_)
        : Error(msg), i(i_), j(j_) {}
};

// Mesh projection hit the projection pole.
struct ProjectionError : Error {
    using Error::Error;
};

// Malformed input file or configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace bonnet
