#pragma once

#include <stdexcept>
#include <string>

namespace surfride {

// Input outside an operation's domain. CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative solver did not converge. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual = 0.0)
        : std::runtime_error(what), residual_(last_residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Well-posed request with no solution in the admissible range. CLI exit code 4.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace surfride
