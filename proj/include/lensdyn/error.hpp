#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lensdyn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two objects that should share a boundary (set, interface, name list) do not.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

// A value violates one of its construction invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lensdyn
