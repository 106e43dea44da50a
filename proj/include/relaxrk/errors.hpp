#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relaxrk {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: unknown names, out-of-range parameters, malformed files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure of a numerical procedure (positivity loss, blowup, root bracketing...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Nonpositive density or pressure at a collocation node.
class StateError : public NumericalError {
 public:
  StateError(const std::string& what, std::size_t element, std::size_t node)
      : NumericalError(what), element_(element), node_(node) {}
  std::size_t element() const noexcept { return element_; }
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t element_;
  std::size_t node_;
};

/// Non-finite stage value or right-hand side.
class BlowupError : public NumericalError {
 public:
  BlowupError(const std::string& what, double t, std::size_t partition)
      : NumericalError(what), t_(t), partition_(partition) {}
  double time() const noexcept { return t_; }
  std::size_t partition() const noexcept { return partition_; }

 private:
  double t_;
  std::size_t partition_;
};

/// No sign change of the relaxation residual could be bracketed.
class BracketError : public NumericalError {
 public:
  BracketError(const std::string& what, std::size_t partition, double r_lo, double r_hi)
      : NumericalError(what), partition_(partition), r_lo_(r_lo), r_hi_(r_hi) {}
  std::size_t partition() const noexcept { return partition_; }
  double residual_lo() const noexcept { return r_lo_; }
  double residual_hi() const noexcept { return r_hi_; }

 private:
  std::size_t partition_;
  double r_lo_;
  double r_hi_;
};

/// The only admissible relaxation root lies at or below the configured floor.
class DegenerateRootError : public NumericalError {
 public:
  DegenerateRootError(const std::string& what, std::size_t partition)
      : NumericalError(what), partition_(partition) {}
  std::size_t partition() const noexcept { return partition_; }

 private:
  std::size_t partition_;
};

/// A relaxed state violates a local entropy inequality beyond tolerance.
class EntropyViolationError : public NumericalError {
 public:
  EntropyViolationError(const std::string& what, std::size_t partition, double excess)
      : NumericalError(what), partition_(partition), excess_(excess) {}
  std::size_t partition() const noexcept { return partition_; }
  double excess() const noexcept { return excess_; }

 private:
  std::size_t partition_;
  double excess_;
};

/// The time loop exceeded its configured step budget.
class StepLimitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace relaxrk
