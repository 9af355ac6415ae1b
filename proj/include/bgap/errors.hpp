#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bgap {

/// Bad user input or configuration. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed bracketed text; carries the 1-based line where parsing failed.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, const std::string& source = {})
      : InputError((source.empty() ? std::string() : source + ":") + "line " +
                   std::to_string(line) + ": " + what),
        detail_(what),
        line_(line) {}

  const std::string& detail() const noexcept { return detail_; }

  std::size_t line() const noexcept { return line_; }

 private:
  std::string detail_;
  std::size_t line_;
};

/// A broken internal invariant (exit code 3).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bgap
