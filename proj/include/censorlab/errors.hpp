#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace censorlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, bracketing, series) did not deliver.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The censor equation has no bracketed root. `flag()` names the sufficient
/// condition that failed, e.g. "rhs_at_zero_exceeds_one".
class ExistenceError : public NumericError {
public:
    ExistenceError(std::string flag, const std::string& what)
        : NumericError(what), flag_(std::move(flag)) {}

    const std::string& flag() const noexcept { return flag_; }

private:
    std::string flag_;
};

/// Scenario configuration problem; `key()` is the dotted path of the
/// offending entry, e.g. "market_params.sigma".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string key, const std::string& what)
        : std::invalid_argument(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace censorlab
