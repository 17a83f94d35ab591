#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tauca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or a computation left the range the representation supports.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Raised by run() when a step overflows digit 0; carries the failing step.
class StepRangeError : public RangeError {
 public:
  StepRangeError(std::size_t step, const std::string& what)
      : RangeError("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// The fixed sign pattern would need a negative digit.
class SignError : public Error {
 public:
  using Error::Error;
};

/// Operands disagree on the radix N or the precision p.
class MixedRadixError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A requested abscissa lies outside the sampled range.
class GridError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

class EmptyTraceError : public Error {
 public:
  using Error::Error;
};

}  // namespace tauca
