#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trajeval {

/// Failure categories. The command-line tool maps these onto exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kNoOverlap,
  kUnderdetermined,
  kDegenerate,
  kNumerical,
  kBehindCamera,
  kSchema,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure tied to a 1-based line of the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trajeval
