#pragma once

#include <stdexcept>
#include <string>

namespace fastmmd {

/// Bad argument, bad configuration, or malformed input data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input file could not be read or parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical postcondition did not hold (non-finite result, etc).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fastmmd
