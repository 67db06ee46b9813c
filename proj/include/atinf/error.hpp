#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atinf {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed caller input: bad polynomial text, unknown variable, dimension mismatch.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A hypothesis required by a formula does not hold, so the quantity is not computable.
class GateError : public Error {
 public:
  using Error::Error;
};

/// The computation ran but could not certify its result (sampling never stabilized, etc).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace atinf
