#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace starkhole {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition or invariant violation on an input value.
class DomainError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double achieved, double requested)
        : Error(msg), achieved_rel_error(achieved), requested_rel_tol(requested) {}

    double achieved_rel_error;
    double requested_rel_tol;
};

// Nonlinear fit did not converge; carries the accepted-step cost trace.
class FitError : public Error {
public:
    FitError(const std::string& msg, std::vector<double> trace)
        : Error(msg), cost_trace(std::move(trace)) {}

    std::vector<double> cost_trace;
};

// Input data carries no usable signal (e.g. constant trace).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// A planning target cannot be reached by any field value.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace starkhole
