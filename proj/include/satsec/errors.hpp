#pragma once

#include <stdexcept>
#include <string>

namespace satsec {

/// Raised when an argument lies outside the domain an operation accepts.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the QoS requirement cannot be met under the power budget.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed or out-of-range experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace satsec
