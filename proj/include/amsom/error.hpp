#pragma once

#include <stdexcept>
#include <string>

namespace amsom {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters (TrainConfig, ExperimentSpec, CLI flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or unusable input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// An operation was asked to act on a map whose structure does not allow it
/// (for example a second-best neuron on a single-neuron map).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown during training (non-finite error, etc).
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace amsom
