#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cstar {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularElement : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidProjection : public Error {
 public:
  using Error::Error;
};

/// The family has (numerically) zero lower frame bound or is empty.
class NotAFrame : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A point of S is not eps-close to S_eps in module norm.
class ApproximationHypothesisViolated : public Error {
 public:
  ApproximationHypothesisViolated(std::size_t point, double distance)
      : Error("point " + std::to_string(point) + " is at distance " + std::to_string(distance) +
              " from the approximating set"),
        point_(point),
        distance_(distance) {}
  std::size_t point() const noexcept { return point_; }
  double distance() const noexcept { return distance_; }

 private:
  std::size_t point_;
  double distance_;
};

/// Raised by the adversarial witness construction when no sample point has a
/// large enough block on some schedule window, i.e. tails already decay.
class UniformTailDecay : public Error {
 public:
  UniformTailDecay(std::size_t window, double best)
      : Error("window " + std::to_string(window) + ": largest windowed norm " + std::to_string(best) +
              " does not exceed 3*delta/4"),
        window_(window),
        best_(best) {}
  std::size_t window() const noexcept { return window_; }
  double best() const noexcept { return best_; }

 private:
  std::size_t window_;
  double best_;
};

/// Generators that were required to be orthonormal are not.
class NotOrthonormal : public Error {
 public:
  NotOrthonormal(const std::string& what, double gram_defect) : Error(what), gram_defect_(gram_defect) {}
  double gram_defect() const noexcept { return gram_defect_; }

 private:
  double gram_defect_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace cstar
