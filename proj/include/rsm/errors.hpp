// SPDX-License-Identifier: Apache-2.0
// Error taxonomy shared by every module. Each class maps to one CLI exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace rsm {

// Input outside the mathematical domain of an operation (exit code 2).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or series evaluation failed to converge (exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficient data does not reach far enough (exit code 4).
class CoverageError : public std::runtime_error {
 public:
  explicit CoverageError(const std::string& what, unsigned long long prime = 0)
      : std::runtime_error(what), prime_(prime) {}
  unsigned long long prime() const { return prime_; }

 private:
  unsigned long long prime_;
};

// An object was used before the data it depends on was supplied (exit code 2).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the offending line number (exit code 2).
class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, int line)
      : DomainError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rsm
