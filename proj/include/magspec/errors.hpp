#pragma once

#include <stdexcept>
#include <string>

namespace magspec {

// Invalid parameters or an inconsistent configuration (grid too coarse, bad sizes, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure did not reach its target (non-convergence, under-resolution,
// failed bracketing). The message carries the diagnostics.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A stated hypothesis of the model is violated (e.g. the field condition b > Theta0 b').
class PreconditionError : public std::logic_error {
public:
    explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested outside the sampled range of a tabulated function.
class ExtrapolationError : public std::out_of_range {
public:
    explicit ExtrapolationError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace magspec
