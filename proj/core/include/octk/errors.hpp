#pragma once

#include <stdexcept>
#include <string>

namespace octk {

// Malformed input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// An operation was called on input that violates its contract.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive work would exceed a configured ceiling.
class CeilingExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace octk
