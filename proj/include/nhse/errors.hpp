#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhse {

/// Malformed lattice, parameter record or argument.
class SpecificationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad configuration file. line/column are 1-based, 0 when not applicable.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string key = {},
                         std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line), column_(column) {}

    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string key_;
    std::size_t line_;
    std::size_t column_;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigensolver did not converge.
class SolverError : public NumericalError {
public:
    SolverError(std::size_t dimension, long iterations, const std::string& what)
        : NumericalError(what), dimension_(dimension), iterations_(iterations) {}

    std::size_t dimension() const noexcept { return dimension_; }
    long iterations() const noexcept { return iterations_; }

private:
    std::size_t dimension_;
    long iterations_;
};

/// The twist grid was too coarse even after refinement.
class ResolutionError : public NumericalError {
public:
    ResolutionError(double phi, const std::string& what) : NumericalError(what), phi_(phi) {}

    double phi() const noexcept { return phi_; }

private:
    double phi_;
};

} // namespace nhse
