#pragma once

#include <stdexcept>
#include <string>

namespace phasenoise {

// Invalid argument or violated type invariant.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnitMismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class GridMismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Query outside a tabulated model's support.
class OutOfRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Tone at or above Nyquist.
class AliasingError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Sample rate too low to resolve the cavity dynamics or analysis band.
class ResolutionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ToneNotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent routes to the same quantity disagree.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasenoise
