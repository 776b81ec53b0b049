#include "trajeval/error.hpp"

namespace trajeval {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kNoOverlap: return "no overlap";
    case ErrorKind::kUnderdetermined: return "underdetermined";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kNumerical: return "numerical failure";
    case ErrorKind::kBehindCamera: return "behind camera";
    case ErrorKind::kSchema: return "schema mismatch";
    case ErrorKind::kIo: return "i/o error";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what),
      line_(line) {}

}  // namespace trajeval
