#pragma once

#include <stdexcept>

namespace epr {

/// Argument outside the mathematical domain of a formula.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition (sizes, sampling, regime).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Invalid or unknown configuration content.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NaN/Inf appeared in the evolved state.
struct NumericFailure : std::runtime_error {
  NumericFailure(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time(last_valid_time) {}
  double last_valid_time;
};

}  // namespace epr
