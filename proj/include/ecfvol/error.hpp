#pragma once

#include <stdexcept>
#include <string>

namespace ecfvol {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model or estimator parameters (bad beta, Feller violation, k_n out of range, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A local window that does not fit inside the sample.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (CSV rows, tick series, sessions).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A statistic that is not defined on this sample, e.g. a non-positive plug-in variance.
class UndefinedStatistic : public Error {
 public:
  UndefinedStatistic(std::string component, double value)
      : Error("undefined statistic: " + component + " = " + std::to_string(value)),
        component_(std::move(component)),
        value_(value) {}

  const std::string& component() const noexcept { return component_; }
  double value() const noexcept { return value_; }

 private:
  std::string component_;
  double value_;
};

}  // namespace ecfvol
