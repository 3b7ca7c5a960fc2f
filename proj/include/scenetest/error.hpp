#pragma once

#include <stdexcept>
#include <string>

namespace scenetest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, wrong types, unknown keys).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid campaign or agent configuration, detected before or while running.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exhausted its draw cap.
class SamplingError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// An event whose precondition does not hold in the current scene state.
/// Raised for agent defects, never for defects of the scene under test.
class IllegalEventError : public Error {
 public:
  using Error::Error;
};

class NotEnabledError : public Error {
 public:
  using Error::Error;
};

/// Structural defect in a Petri net description; element() names the offender.
class NetValidationError : public Error {
 public:
  NetValidationError(std::string element, const std::string& message)
      : Error(message + " (" + element + ")"), element_(std::move(element)) {}

  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

class DigestMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenetest
