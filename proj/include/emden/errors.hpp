#pragma once

#include <stdexcept>
#include <string>

namespace emden {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed spec files, violated preconditions, bad flags.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Arithmetic leaves its domain: log of a nonpositive number, x/0, 0^-k, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of a construction does not hold
/// (IntCond2 violated, beta nonpositive, condition c21 = -c11 broken, ...).
class ConditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace emden
