#pragma once

#include <stdexcept>
#include <string>

namespace mig {

// Bad arguments: wrong shapes, out-of-range settings, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A computation failed: non-convergence, loss of definiteness, no descent step.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the domain of a matrix function (e.g. a non-positive eigenvalue).
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace mig
