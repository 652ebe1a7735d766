#pragma once

#include <stdexcept>
#include <string>

namespace curio {

// Caller passed something outside an operation's domain (bad length, shape, index).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API used out of order, e.g. stepping a finished episode.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A NaN or Inf was produced; the message names the producing operation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Procedural layout generation gave up.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace curio
