#pragma once

#include <stdexcept>
#include <string>

namespace critflow {

// Caller supplied something outside an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation produced a value that valid inputs cannot produce
// (hyperboloid drift, non-positive Busemann argument, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Orbit enumeration would exceed the configured size cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, unsigned long long required)
      : std::runtime_error(what), required_(required) {}
  unsigned long long required() const { return required_; }

 private:
  unsigned long long required_;
};

// Critical exponent estimation could not produce a trustworthy value.
class EstimateError : public std::runtime_error {
 public:
  explicit EstimateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace critflow
