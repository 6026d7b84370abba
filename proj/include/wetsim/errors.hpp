// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace wetsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Point outside the open working set. `constraint` is the cut index, or one of
// the negative sentinels below for the two box constraints.
class BoundaryError : public DomainError {
 public:
  static constexpr int kLowerBox = -2;  // G > 0 violated
  static constexpr int kUpperBox = -1;  // I - G > 0 violated

  BoundaryError(int constraint, const std::string& what) : DomainError(what), constraint_(constraint) {}
  int constraint() const noexcept { return constraint_; }

 private:
  int constraint_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double grad_norm) : Error(what), grad_norm_(grad_norm) {}
  double grad_norm() const noexcept { return grad_norm_; }

 private:
  double grad_norm_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ResamplingError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wetsim
