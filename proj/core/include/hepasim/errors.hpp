#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hepasim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No grid cell center falls inside the portal disc.
class EmptyPortal : public Error {
 public:
  using Error::Error;
};

/// Growth law evaluated at or beyond its pole u = -kappa.
class PoleInput : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(std::size_t max_iters, double residual)
      : Error("iterative solve did not converge in " + std::to_string(max_iters) +
              " iterations (residual " + std::to_string(residual) + ")"),
        max_iters_(max_iters),
        residual_(residual) {}

  std::size_t max_iters() const noexcept { return max_iters_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t max_iters_;
  double residual_;
};

/// Right-hand side of a pure Neumann problem does not integrate to zero.
class SolvabilityViolated : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the explicit-reaction stability bound.
class StabilityViolation : public Error {
 public:
  using Error::Error;
};

/// A state invariant (non-negativity) was broken by more than roundoff.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NoValidSamples : public Error {
 public:
  using Error::Error;
};

class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hepasim
