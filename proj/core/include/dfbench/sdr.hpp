#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dfbench/metrics.hpp"

namespace dfbench {

enum class TextEncoding { kUtf8, kUtf16le, kUtf16be };
std::string_view TextEncodingName(TextEncoding e);
std::optional<TextEncoding> ParseTextEncoding(std::string_view text);

// SFT-01 parameters.
struct SqliteConfigReport {
  std::uint32_t page_size = 0;
  std::string journal_mode;
  std::uint64_t page_count = 0;
  std::string file_hash;
  TextEncoding text_encoding = TextEncoding::kUtf8;

  friend bool operator==(const SqliteConfigReport&, const SqliteConfigReport&) = default;
};

struct SqliteTable {
  std::string name;
  std::vector<std::string> columns;
  std::uint64_t row_count = 0;

  friend bool operator==(const SqliteTable&, const SqliteTable&) = default;
};

// SFT-02 parameters.
struct SqliteSchemaReport {
  std::vector<SqliteTable> tables;

  friend bool operator==(const SqliteSchemaReport&, const SqliteSchemaReport&) = default;
};

// SFT-03 parameters.
struct SqliteRowRecoveryReport {
  std::string database_name;
  std::set<std::int64_t> deleted_row_ids;
  std::set<std::int64_t> updated_row_ids;

  friend bool operator==(const SqliteRowRecoveryReport&,
                         const SqliteRowRecoveryReport&) = default;
};

// SFT-04 parameters.
struct SqliteSourceReport {
  std::string source_file;

  friend bool operator==(const SqliteSourceReport&, const SqliteSourceReport&) = default;
};

using SqliteReport = std::variant<SqliteConfigReport, SqliteSchemaReport,
                                  SqliteRowRecoveryReport, SqliteSourceReport>;

enum class SftKind { kConfig = 1, kSchema = 2, kRowRecovery = 3, kSource = 4 };

// From the "SFT-0N" prefix; variation suffixes are ignored. Throws
// UnknownTestCase.
SftKind SftKindForTestCase(std::string_view test_case);

// Parses a JSON object into the report shape required by the test case.
// Throws ParseError on malformed JSON and ShapeMismatch when required keys
// are missing, mistyped, or violate the report's invariants.
SqliteReport ParseSqliteReport(std::string_view test_case, std::string_view json);
std::string SqliteReportToJson(const SqliteReport& report);

// Ground truth uses the same JSON shapes as the reports.
inline SqliteReport ParseSqliteGroundTruth(std::string_view test_case,
                                           std::string_view payload) {
  return ParseSqliteReport(test_case, payload);
}

struct SdrScore {
  MatchCounts counts;
  Metrics metrics;
};

// Each of the five parameters: match -> tp, mismatch -> fp. fn is 0.
SdrScore ScoreSft01(const SqliteConfigReport& ground_truth,
                    const SqliteConfigReport& report);

// Per reported table, all-or-nothing on name, ordered columns and row
// count: tp or fp. fn is 0. Table order is irrelevant.
SdrScore ScoreSft02(const SqliteSchemaReport& ground_truth,
                    const SqliteSchemaReport& report);

// Row ids are compared within their category (deleted, updated).
//   tp: reported ids present in the ground truth
//   fp: ground-truth ids missing from the report
//   fn: reported ids absent from the ground truth
// strict swaps fp and fn to the conventional meaning.
SdrScore ScoreSft03(const SqliteRowRecoveryReport& ground_truth,
                    const SqliteRowRecoveryReport& report, bool strict = false);

// Case-sensitive comparison of base names: tp or fp. fn is 0.
SdrScore ScoreSft04(const SqliteSourceReport& ground_truth,
                    const SqliteSourceReport& report);

// Dispatches on the alternative held. Throws ShapeMismatch if the two
// alternatives differ.
SdrScore ScoreSqlite(const SqliteReport& ground_truth, const SqliteReport& report,
                     bool strict_sft03 = false);

struct SqliteHeader {
  std::uint32_t page_size = 0;
  std::uint64_t page_count = 0;
  TextEncoding text_encoding = TextEncoding::kUtf8;
  std::uint8_t write_version = 0;
  std::uint8_t read_version = 0;
};

// Decodes the 100-byte database header. Throws NotSqlite or Truncated.
SqliteHeader ReadSqliteHeader(std::span<const std::uint8_t> bytes);

// "wal" when the header's write version is 2 or a -wal companion exists,
// otherwise "delete".
std::string JournalModeHint(const SqliteHeader& header, bool has_wal_companion);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);

}  // namespace dfbench
