#pragma once

#include <stdexcept>
#include <string>

namespace paretobf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree (vector length, matrix dimension, list size).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of an operation (bad step, t outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

/// A set of vectors that must be linearly independent is not.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// Scenario file or in-memory scenario violates the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A sweep would exceed its configured point budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace paretobf
