#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinladder {

/// Requested leg length would overflow the enumerable dimension range.
class DimensionOverflowError : public std::invalid_argument {
public:
    explicit DimensionOverflowError(const std::string& what) : std::invalid_argument(what) {}
};

/// A basis/operator was supplied in the wrong representation.
class RepresentationMismatchError : public std::invalid_argument {
public:
    explicit RepresentationMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionMismatchError : public std::invalid_argument {
public:
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// Amplitude-ordered sorting was requested without ground-state amplitudes.
class MissingAmplitudesError : public std::invalid_argument {
public:
    explicit MissingAmplitudesError(const std::string& what) : std::invalid_argument(what) {}
};

class UndefinedDeviationError : public std::domain_error {
public:
    explicit UndefinedDeviationError(const std::string& what) : std::domain_error(what) {}
};

class UnnormalizedAmplitudesError : public std::invalid_argument {
public:
    explicit UnnormalizedAmplitudesError(const std::string& what) : std::invalid_argument(what) {}
};

/// All three coefficients of the renormalization quadratic vanished.
class DegenerateQuadraticError : public std::domain_error {
public:
    explicit DegenerateQuadraticError(const std::string& what) : std::domain_error(what) {}
};

/// Iterative eigensolver ran out of iterations; carries the best residuals seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals, long iterations)
        : std::runtime_error(what), residuals_(std::move(residuals)), iterations_(iterations) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }
    long iterations() const noexcept { return iterations_; }

private:
    std::vector<double> residuals_;
    long iterations_;
};

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinladder
