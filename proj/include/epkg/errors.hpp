#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace epkg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was violated (e.g. T_end beyond the wrap horizon).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Density perturbation with nonzero mean.
class NeutralityViolation : public Error {
 public:
  using Error::Error;
};

/// Velocity field with curl above tolerance.
class RotationalInput : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t_reached, double last_l2)
      : Error(what), t_reached_(t_reached), last_l2_(last_l2) {}
  double t_reached() const { return t_reached_; }
  double last_finite_l2() const { return last_l2_; }

 private:
  double t_reached_;
  double last_l2_;
};

/// Malformed run configuration; carries the offending line and key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : Error(what), line_(line), key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace epkg
