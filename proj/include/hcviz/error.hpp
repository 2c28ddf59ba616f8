#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcviz {

enum class ErrorKind {
  parse,
  invalid_argument,
  not_found,
  refused,
  no_substructure,
  significance_boundary,
  invalid_move,
  not_ready,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind is what callers branch on (CLI exit
/// codes, HTTP status); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hcviz
