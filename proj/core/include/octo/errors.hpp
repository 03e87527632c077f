#pragma once

#include <stdexcept>
#include <string>

namespace octo {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point was evaluated outside the landscape domain under the Error policy.
class OutOfDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed object failed its own consistency checks.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An optimizer iterate left the sane numeric range.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cataloged quantity failed verification against direct evaluation.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two inputs that must describe the same object disagree.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace octo
