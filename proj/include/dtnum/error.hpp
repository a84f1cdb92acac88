#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtnum {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (substitution strings, automaton files, words).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A polynomial was required to be ultimately Pisot and is not.
class NotPisotError : public Error {
 public:
  using Error::Error;
};

// The bounded flattening produced more states than allowed.
class BoundExplosion : public Error {
 public:
  BoundExplosion(std::size_t cap)
      : Error("bound explosion: flattening exceeded the state cap of " + std::to_string(cap)),
        cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace dtnum
