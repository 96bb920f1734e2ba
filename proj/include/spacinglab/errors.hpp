#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spacinglab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach the requested residual.
class SolveError : public Error {
public:
    SolveError(const std::string& msg, double last_residual)
        : Error(msg), residual(last_residual) {}
    double residual;
};

/// Computed equilibrium density dipped below zero beyond tolerance.
class DensityNegativeError : public Error {
public:
    using Error::Error;
};

/// Self-consistent iteration for repulsive systems did not converge.
class FixedPointError : public Error {
public:
    FixedPointError(const std::string& msg, std::vector<double> history)
        : Error(msg), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// MCMC chain stopped accepting moves after step-size adaptation.
class MixingError : public Error {
public:
    using Error::Error;
};

/// Requested computation exceeds the combinatorial/cost guard.
class ComplexityError : public Error {
public:
    using Error::Error;
};

/// A spacing statistic was requested on an empty spacing multiset.
class NoSpacingsError : public Error {
public:
    using Error::Error;
};

/// Numerical construction failed a built-in consistency check.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Floating-point precision exhausted (overflow guard, lost positivity).
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// Malformed persisted file; carries the offending line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line_number)
        : Error(msg + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
    int line;
};

} // namespace spacinglab
