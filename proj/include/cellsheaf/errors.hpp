#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cellsheaf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that fails structural validation (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A theorem's hypotheses do not hold for the input (CLI exit code 3).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidField : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string path, const std::string& what)
      : ValidationError(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class DanglingId : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonGradedCover : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownCell : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotASubcomplex : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class FiberInclusionViolated : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Pairs of cells reported by a failed identity check, as (lower, upper) ids.
using WitnessPairs = std::vector<std::pair<std::string, std::string>>;

class WitnessedError : public ValidationError {
 public:
  WitnessedError(const std::string& what, WitnessPairs witnesses)
      : ValidationError(what), witnesses_(std::move(witnesses)) {}

  const WitnessPairs& witnesses() const noexcept { return witnesses_; }

 private:
  WitnessPairs witnesses_;
};

/// Signed incidences violate sum_{s<l<t} [s:l][l:t] = 0 for the listed (s, t).
class IncidenceIdentityViolation : public WitnessedError {
 public:
  using WitnessedError::WitnessedError;
};

/// A compiled sheaf whose coboundary does not square to zero.
class InvalidSheafData : public WitnessedError {
 public:
  using WitnessedError::WitnessedError;
};

/// d^{n+1} d^n != 0; witnesses are (source, target) element ids.
class NotAComplex : public WitnessedError {
 public:
  using WitnessedError::WitnessedError;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class NotACover : public Error {
 public:
  using Error::Error;
};

class CyclicMatching : public Error {
 public:
  using Error::Error;
};

class NotACocycle : public Error {
 public:
  using Error::Error;
};

class SolveFailed : public Error {
 public:
  using Error::Error;
};

class NerveTooBig : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace cellsheaf
