#pragma once

#include <stdexcept>
#include <string>

namespace accel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, empty blocks, unpaired runs.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Cholesky pivot not positive.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// 1ᵀz vanished while normalizing coefficients.
class DegenerateNormalizationError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve hit its cap. `achieved` holds the final residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// A combination schedule outside the admissible class.
class ClassViolationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Bad parameters or configuration, detected before any computation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace accel
