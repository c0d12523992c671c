#pragma once

#include <stdexcept>
#include <string>

namespace bist {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input.  position() is a byte offset for polynomial
// strings and a 1-based line number for netlist sources; the message
// repeats it in readable form.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Well-formed input that violates a precondition (zero divisor, zero seed,
// width mismatch, foreign fault, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Value outside the representable range (exponent past 63, product past
// degree 63, hex mask wider than 64 bits).
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace bist
