/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by all probspline components.
 *
 * Two families: ValidationError for malformed inputs (bad shapes, domains,
 * configuration) and NumericalError for failures that arise during an
 * otherwise well-posed computation. The CLI maps the families to distinct
 * process exit codes.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace probspline {

/// Root of all probspline exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input: shapes, domains, ordering, configuration.
struct ValidationError : Error {
  using Error::Error;
};

/// Failure inside a numerically well-posed operation.
struct NumericalError : Error {
  using Error::Error;
};

struct InvalidBasisError : ValidationError {
  using ValidationError::ValidationError;
};

struct InvalidDomainError : ValidationError {
  using ValidationError::ValidationError;
};

struct OutOfDomainError : ValidationError {
  using ValidationError::ValidationError;
};

struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

struct InputOrderError : ValidationError {
  using ValidationError::ValidationError;
};

struct DerivativeUndefinedError : ValidationError {
  using ValidationError::ValidationError;
};

struct InvalidBoundError : ValidationError {
  using ValidationError::ValidationError;
};

struct DegenerateGridError : ValidationError {
  using ValidationError::ValidationError;
};

struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};

struct SingularConditioningError : NumericalError {
  using NumericalError::NumericalError;
};

struct NotPsdError : NumericalError {
  using NumericalError::NumericalError;
};

struct FieldEvaluationError : NumericalError {
  using NumericalError::NumericalError;
};

struct RateUndefinedError : NumericalError {
  using NumericalError::NumericalError;
};

struct DegeneratePosteriorError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace probspline
