#pragma once

#include <stdexcept>
#include <string>

namespace rinv {

// Bad or missing configuration. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mathematical precondition failed: constraint violation, missing bracket,
// singular denominator, nonpositive density. CLI exit code 2.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver failure (divergence, singular Jacobian, subdivision cap).
// Treated as a precondition failure by the CLI.
class SolverError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

} // namespace rinv
