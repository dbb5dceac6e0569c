#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shiftlab {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite entries or otherwise unusable numeric input.
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

// Two values built against different basis windows were combined.
class WindowMismatchError : public Error {
 public:
  using Error::Error;
};

// A projection or grid index exceeded the basis window.
class WindowOverflowError : public Error {
 public:
  using Error::Error;
};

// Inversion requested on a numerically singular matrix.  Carries the
// offending smallest singular value.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double sigma_min)
      : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_ = 0.0;
};

// A weight family delivered an operator violating its declared bounds.
class WeightBoundError : public Error {
 public:
  using Error::Error;
};

// A run asked for powers beyond the declared experiment horizon.
class HorizonExceededError : public Error {
 public:
  using Error::Error;
};

// A series-based construction found non-summable terms at the horizon.
// Carries the partial sums computed so far.
class ConstructionFailedError : public Error {
 public:
  ConstructionFailedError(const std::string& what, std::vector<double> partial_sums)
      : Error(what), partial_sums_(std::move(partial_sums)) {}
  const std::vector<double>& partial_sums() const noexcept { return partial_sums_; }

 private:
  std::vector<double> partial_sums_;
};

// Argument violates a documented precondition.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftlab
