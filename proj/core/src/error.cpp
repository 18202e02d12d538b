#include "dfbench/error.hpp"

namespace dfbench {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptySuite: return "EmptySuite";
    case ErrorKind::kIncompleteBench: return "IncompleteBench";
    case ErrorKind::kSchemaViolation: return "SchemaViolation";
    case ErrorKind::kConsistencyViolation: return "ConsistencyViolation";
    case ErrorKind::kUnknownTestCase: return "UnknownTestCase";
    case ErrorKind::kOutOfPartition: return "OutOfPartition";
    case ErrorKind::kNotDecodable: return "NotDecodable";
    case ErrorKind::kGroundTruthUnavailable: return "GroundTruthUnavailable";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kNotSqlite: return "NotSqlite";
    case ErrorKind::kTruncated: return "Truncated";
    case ErrorKind::kDuplicateGroundTruth: return "DuplicateGroundTruth";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kStorage: return "StorageError";
    case ErrorKind::kPayloadTooLarge: return "PayloadTooLarge";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(message), kind_(kind), line_(line) {}

void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

void FailParse(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kParseError,
              "line " + std::to_string(line) + ": " + message, line);
}

}  // namespace dfbench
