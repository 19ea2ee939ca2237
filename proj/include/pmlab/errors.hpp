#pragma once

#include <stdexcept>
#include <string>

namespace pmlab {

// Argument outside the admissible domain of an operation.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Log-log regression residual too large: the nonlinearity is not of
// porous-medium type near zero.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

// Newton iteration exhausted its budget; carries the last residual norm.
class NewtonDivergence : public std::runtime_error {
 public:
  NewtonDivergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_norm(residual) {}
  double residual_norm;
};

// No grid sample falls inside the requested cylinder.
class EmptyCylinder : public std::runtime_error {
 public:
  explicit EmptyCylinder(const std::string& what) : std::runtime_error(what) {}
};

// A stated precondition of a diagnostic does not hold.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

class ZeroField : public std::runtime_error {
 public:
  explicit ZeroField(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateDenominator : public std::runtime_error {
 public:
  explicit DegenerateDenominator(const std::string& what)
      : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pmlab
