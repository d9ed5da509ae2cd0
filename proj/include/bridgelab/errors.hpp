#pragma once

#include <stdexcept>
#include <string>

namespace bridgelab {

/// Argument outside the domain of an operation (negative time, unordered grid, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation of a tabulated drift outside its table range.
class ExtrapolationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double estimate, double achieved_error)
        : std::runtime_error(what + " (estimate=" + std::to_string(estimate) +
                             ", error=" + std::to_string(achieved_error) + ")"),
          estimate_(estimate),
          achieved_error_(achieved_error) {}

    double estimate() const noexcept { return estimate_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double estimate_;
    double achieved_error_;
};

/// Too few usable points for a regression.
class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation requested on a path produced by a scheme that cannot support it.
class UnsupportedSchemeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rejected configuration entry; the message starts with the key path.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& problem)
        : std::invalid_argument(key + ": " + problem), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace bridgelab
