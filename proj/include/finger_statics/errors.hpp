#pragma once

#include <stdexcept>
#include <string>

namespace finger_statics {

/// Base class for every error raised by the model. The CLI maps these to
/// exit code 1; ConfigError maps to exit code 2.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a type invariant (negative tension, c outside (0, 1], ...).
class DomainError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Mismatched list lengths between related inputs.
class ShapeError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// The cable-direction relation has a vanishing denominator.
class SingularConfigurationError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// The arcsin argument of the cable-direction relation left [-1, 1].
class InfeasibleConformationError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// The fingertip force line passes through the knuckle.
class DegenerateLeverError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// The equilibrium system is rank deficient (the loaded chain is a mechanism).
class MechanismError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Equilibrium residual above tolerance.
class InconsistencyError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Calibration data cannot identify the loss coefficient.
class UnidentifiableError : public ModelError {
 public:
  using ModelError::ModelError;
};

class NoFeasibleDesignError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Malformed configuration or fixture file. Messages name the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace finger_statics
