#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmt {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: a spec string, a config field, a file schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A modulus of continuity that is not an increasing bijection on its range.
class ModulusInvalidError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the range where an operation is defined.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A violated precondition (wrong branch, wrong parameters, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The sampling resolution cannot support the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A cube or frame that is not part of the structure it was looked up in.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A (weighted) cover that fails to cover one of the target points.
class CoverInvalidError : public Error {
 public:
  using Error::Error;
};

/// A hierarchical mass distribution whose masses are not conserved.
class TreeInvalidError : public Error {
 public:
  using Error::Error;
};

/// A geometric argument outside the domain of a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of the covering construction failed.
class InternalInconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or root finding did not converge. Carries the best value.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial_value)
      : Error(what), partial_value_(partial_value) {}
  double partial_value() const noexcept { return partial_value_; }

 private:
  double partial_value_;
};

/// Whitney decomposition ran out of its cube budget.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t cubes_emitted)
      : Error(what), cubes_emitted_(cubes_emitted) {}
  std::size_t cubes_emitted() const noexcept { return cubes_emitted_; }

 private:
  std::size_t cubes_emitted_;
};

}  // namespace gmt
