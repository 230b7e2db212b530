#pragma once

#include <stdexcept>
#include <string>

namespace cvqt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state does not fit the truncated Fock basis. Carries the measured leakage.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

/// A quadrature, root find or optimizer did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace cvqt
