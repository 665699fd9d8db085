#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Input that parses but violates a structural invariant (unknown symbol,
// non-normal statement where a normal one is required, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The deterministic knowledge (plus closure) contradicts itself.
class IncoherentError : public Error {
 public:
  IncoherentError(const std::string& message, std::vector<std::string> conflict)
      : Error(message), conflict_(std::move(conflict)) {}
  const std::vector<std::string>& conflict() const { return conflict_; }

 private:
  std::vector<std::string> conflict_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& message, std::vector<std::size_t> constraints)
      : Error(message), constraints_(std::move(constraints)) {}
  // Indices into IlpProgram::constraints forming an irreducible conflict.
  const std::vector<std::size_t>& constraints() const { return constraints_; }

 private:
  std::vector<std::size_t> constraints_;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace mel
