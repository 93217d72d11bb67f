#pragma once

#include <stdexcept>
#include <string>

namespace ncfree {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands disagree on the number of generators, or a letter is outside 1..n.
class GeneratorMismatch : public Error {
 public:
  using Error::Error;
};

/// A trace was requested on a word longer than the functional's degree bound.
class DegreeBoundExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A self-pairing <p,p> came out negative or non-real: the moment data is not a state.
class NotPositive : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncfree
