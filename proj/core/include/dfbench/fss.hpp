#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfbench/metrics.hpp"
#include "dfbench/records.hpp"

namespace dfbench {

// A planted search hit. The identifier is the four-digit number concatenated
// with the line in the reference data.
struct FssGroundTruthHit {
  std::string identifier;
  std::string line_text;
  std::string test_case;
  std::string os;
  std::optional<FileStatus> file_status;
};

struct FssReport {
  std::string test_case;
  std::string os;
  // Optional narrowing to one file-status subset of the ground truth.
  std::optional<FileStatus> file_status;
  std::vector<std::string> reported_lines;
};

// First standalone run of exactly four decimal digits, i.e. bounded by
// non-digits or the line edges. "12345" contains no identifier.
std::optional<std::string> ExtractIdentifier(std::string_view line);

struct FssPayload {
  std::string identifier;
  std::string line_text;
};
// Ground-truth payload "<id>|<line text>"; nullopt when malformed.
std::optional<FssPayload> ParseFssPayload(std::string_view payload);
std::string FormatFssPayload(const FssPayload& p);

// Splits uploaded file content into reported lines (LF or CRLF), dropping
// only the terminators and empty lines.
std::vector<std::string> SplitReportedLines(std::string_view content);

struct FssScore {
  MatchCounts counts;
  Metrics metrics;
};

// Ground-truth hits are first narrowed to the report's os (case-insensitive)
// and, when given, its file status; an empty subset is UnknownTestCase.
//
// TP: distinct reported identifiers present in the subset.
// FP: distinct reported identifiers absent from it, plus one per distinct
//     identifier-less line text.
// FN: subset identifiers never reported.
FssScore ScoreStringSearch(const FssReport& report,
                           std::span<const FssGroundTruthHit> ground_truth);

std::vector<FssGroundTruthHit> FssHitsFromRecords(
    std::span<const GroundTruthRecord> records);

}  // namespace dfbench
