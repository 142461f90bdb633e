#pragma once

#include <stdexcept>
#include <string>

namespace trapcal {

// Bad user input: malformed files, violated preconditions, unknown indices.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine failed to converge or left its valid region.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinear fit did not converge within the iteration cap.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& msg, double residual_norm)
        : std::runtime_error(msg), residual_norm(residual_norm) {}
    double residual_norm;
};

}  // namespace trapcal
