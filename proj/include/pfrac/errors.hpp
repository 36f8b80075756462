#pragma once

#include <stdexcept>
#include <string>

namespace pfrac {

/// Root of every error raised by the library. Callers that only need to
/// report failures can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction parameters (s outside (0,1), odd grid size, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SymmetryViolation : public Error {
public:
    using Error::Error;
};

/// Division by a vanishing k = 0 multiplier with a nonzero mean in the data.
class SingularMode : public Error {
public:
    using Error::Error;
};

class BadExponent : public Error {
public:
    using Error::Error;
};

/// The constant mode has no decaying extension profile when m = 0.
class ZeroModeNoDecay : public Error {
public:
    using Error::Error;
};

class QuadratureUnconverged : public Error {
public:
    using Error::Error;
};

class ExtrapolationDiverged : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    HypothesisViolated(std::string hypothesis, std::string witness)
        : Error("hypothesis " + hypothesis + " violated at " + witness),
          hypothesis_(std::move(hypothesis)), witness_(std::move(witness)) {}

    const std::string& hypothesis() const noexcept { return hypothesis_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string hypothesis_;
    std::string witness_;
};

// Solver-side failures. These map to exit code 3 in the CLI.
class SolverError : public Error {
public:
    using Error::Error;
};

class NoPositiveRidge : public SolverError {
public:
    using SolverError::SolverError;
};

class BoundaryNotNegative : public SolverError {
public:
    BoundaryNotNegative(double ray_cap, double y_cap, const std::string& detail)
        : SolverError("linking boundary not nonpositive (R=" + std::to_string(ray_cap) +
                      ", R'=" + std::to_string(y_cap) + "): " + detail),
          ray_cap_(ray_cap), y_cap_(y_cap) {}

    double ray_cap() const noexcept { return ray_cap_; }
    double y_cap() const noexcept { return y_cap_; }

private:
    double ray_cap_;
    double y_cap_;
};

class MaxItersReached : public SolverError {
public:
    using SolverError::SolverError;
};

class NoNontrivialSolution : public SolverError {
public:
    using SolverError::SolverError;
};

class DivergedRefinement : public SolverError {
public:
    using SolverError::SolverError;
};

class LimitCollapsed : public SolverError {
public:
    using SolverError::SolverError;
};

class NotCauchy : public SolverError {
public:
    using SolverError::SolverError;
};

class InsufficientDecay : public Error {
public:
    using Error::Error;
};

// Configuration front end.
class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace pfrac
