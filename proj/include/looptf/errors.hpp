#pragma once

#include <stdexcept>
#include <string>

namespace looptf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatches, non-square or asymmetric inputs, non-finite entries.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Scalar arguments outside their admissible range (e.g. step size <= 0).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix not invertible in working precision.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver failed to converge; message carries the residual.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Query scalar alpha is zero (the task requires alpha != 0).
class InvalidQueryError : public Error {
 public:
  using Error::Error;
};

/// Fewer examples than features (n <= d).
class UnderdeterminedError : public Error {
 public:
  using Error::Error;
};

/// A bound was requested outside its hypotheses (nonzero initial query,
/// or a step schedule other than constant 1/L).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A runtime cross-check failed (e.g. an emitted record violated the
/// theoretical error ceiling).
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input file exists but does not parse as the expected format.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace looptf
