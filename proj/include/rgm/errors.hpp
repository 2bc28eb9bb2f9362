#pragma once

#include <stdexcept>
#include <string>

namespace rgm {

// Caller handed us something malformed (bad dimension, bad config value).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative numeric routine diverged, failed to converge, or hit non-finite values.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Object used outside its valid window (stale tape, checkpoint/schedule mismatch).
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation requires a step-wise decomposable forward process and this schedule has none.
class UnsupportedSchedule : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptFile : public IoError {
 public:
  using IoError::IoError;
};

class VersionMismatch : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace rgm
