#pragma once

#include <stdexcept>
#include <string>

namespace hypwave {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a stepper produces non-finite values or loses resolution.
/// Carries the last time at which the state was still healthy.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double last_healthy_time)
      : std::runtime_error(what), time_(last_healthy_time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ClassMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedScale : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypwave
