#pragma once

#include <stdexcept>
#include <string>

namespace gaussgap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input that the caller controls (orders, lengths, domains, files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failures of the numerics themselves; the CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidOrderError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ContractViolation : public InputError {
 public:
  using InputError::InputError;
};

class ResolutionError : public InputError {
 public:
  using InputError::InputError;
};

class ExperimentSetupError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SpectralExtractionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An eigenfunction property that must hold for the exact solution failed
/// numerically; usually means the discretization is too coarse.
class LemmaViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PositivityViolation : public LemmaViolation {
 public:
  using LemmaViolation::LemmaViolation;
};

}  // namespace gaussgap
