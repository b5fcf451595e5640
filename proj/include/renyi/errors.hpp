#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ConditionViolated : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class InfeasibleMean : public Error {
 public:
  using Error::Error;
};

class AbsoluteContinuityViolated : public Error {
 public:
  using Error::Error;
};

// Raised when the argument of the Bregman-like logarithm is nonpositive.
// Carries both raw terms for diagnosis.
class LogDomainError : public Error {
 public:
  LogDomainError(const std::string& msg, double log_argument, double base_term)
      : Error(msg), log_argument(log_argument), base_term(base_term) {}
  double log_argument;
  double base_term;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace renyi
