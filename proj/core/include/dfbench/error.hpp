#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dfbench {

enum class ErrorKind {
  kEmptySuite,
  kIncompleteBench,
  kSchemaViolation,
  kConsistencyViolation,
  kUnknownTestCase,
  kOutOfPartition,
  kNotDecodable,
  kGroundTruthUnavailable,
  kParseError,
  kNotSqlite,
  kTruncated,
  kDuplicateGroundTruth,
  kShapeMismatch,
  kInvalidArgument,
  kStorage,
  kPayloadTooLarge,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure the engine reports is an Error carrying a machine-readable
// kind. ParseError additionally carries the 1-based input line, 0 if unknown.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& message);
[[noreturn]] void FailParse(std::size_t line, const std::string& message);

}  // namespace dfbench
