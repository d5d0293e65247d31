#pragma once

#include <stdexcept>
#include <string>

namespace kljn {

// Invalid simulation or experiment configuration (sampling parameters,
// attack sizes, unknown preset names, malformed config files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside the mathematical domain of an operation: negative
// intensities, infeasible observables, zero variances.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Not enough usable data to form an estimate (every bit dropped, too few
// samples for a spectrum, ...).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kljn
