#pragma once

#include <stdexcept>
#include <string>

namespace ch2 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An atom is too light to occupy at least two label cells.
class GridTooCoarseError : public Error {
 public:
  using Error::Error;
};

/// A degenerate node (q = 0) carries density, which no pushforward can produce.
class InconsistentStateError : public Error {
 public:
  using Error::Error;
};

class NonMonotoneError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class UnknownScenarioError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a step produces a state far outside the admissible set.
class StepRejectedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ch2
