// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <stdexcept>
#include <string>

namespace maskaid {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied values: out-of-range thresholds, degenerate geometry,
// silent signals where a non-silent one is required, and so on.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem problems: missing files, unreadable paths, short reads.
class IoError : public Error {
 public:
  using Error::Error;
};

// Structurally broken files: wrong magic, wrong wav encoding, parameter
// files whose shape manifest does not match the requested model.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Tensor shape mismatches (broadcast failures, bad axes, rank errors).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Math domain violations: log of a non-positive value, division by zero,
// negative input to the compression stage.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operations attempted on objects in the wrong state (e.g. forward on an
// uninitialized model).
class StateError : public Error {
 public:
  using Error::Error;
};

// Missing or unresolvable runtime configuration (data files, config keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training diverged or produced non-finite gradients.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace maskaid
