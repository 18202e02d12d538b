#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfbench/metrics.hpp"
#include "dfbench/suite.hpp"
#include "dfbench/timestamp.hpp"

namespace dfbench {

enum class FileStatus { kActive, kDeleted, kUnallocated };
enum class CarveType { kContig, kNon, kFrag };

std::string_view FileStatusName(FileStatus s);
std::optional<FileStatus> ParseFileStatus(std::string_view text);
std::string_view CarveTypeName(CarveType t);
// Accepts "contig"/"conti", "non", "frag".
std::optional<CarveType> ParseCarveType(std::string_view text);

// Inclusive range of block indices.
struct BlockRange {
  std::uint64_t start_block = 0;
  std::uint64_t end_block = 0;

  friend auto operator<=>(const BlockRange&, const BlockRange&) = default;
};

// "0-63;128-130" (a lone index "7" means 7-7). Throws InvalidArgument.
std::vector<BlockRange> ParseBlockRanges(std::string_view text);
std::string FormatBlockRanges(const std::vector<BlockRange>& ranges);

struct ConfigEntry {
  std::string key;
  std::string value;
  // Suite name or "global".
  std::string scope = "global";
};

// One expected artefact. Which optional fields apply depends on cftt_task:
//
//   string_search          payload = "<4-digit id>|<line text>", os, type
//   deleted_file_recovery  file_name, size, timestamps, dfr_blocks
//   file_carving           carve_type, payload = ground-truth image path
//   windows_registry       payload = ground-truth dump CSV path
//   sqlite                 payload = JSON parameter set for the SFT case
struct GroundTruthRecord {
  std::int64_t id = 0;
  std::string test_case;
  Suite cftt_task = Suite::kStringSearch;
  std::optional<FileStatus> type;
  std::optional<std::string> os;
  std::optional<std::string> file_name;
  std::optional<std::uint64_t> size;
  std::optional<Timestamp> access_time_stamp;
  std::optional<Timestamp> modify_time_stamp;
  std::optional<Timestamp> change_time_stamp;
  std::optional<Timestamp> deleted_time_stamp;
  std::optional<std::vector<BlockRange>> dfr_blocks;
  std::optional<CarveType> carve_type;
  std::string payload;
};

// Deleted-file test cases whose ground truth is expressed as block sets; a
// record for one of these without dfr_blocks is rejected.
bool IsDfrBlockTestCase(std::string_view test_case);

// Throws SchemaViolation when the record does not satisfy its suite's field
// requirements.
void ValidateGroundTruth(const GroundTruthRecord& record);

// Identity used for duplicate detection at ingest: the FSS identifier for
// string search, the full field tuple otherwise.
std::string NaturalKey(const GroundTruthRecord& record);

struct TestResultRecord {
  std::int64_t id = 0;
  std::string test_case;
  std::string tool = "unspecified";
  std::string job_id;
  MatchCounts counts;
  double f1 = 0.0;
  Timestamp created_at;
};

struct ResultFilter {
  std::optional<std::string> test_case;
  std::optional<std::string> tool;
  std::optional<std::string> job_id;
};

}  // namespace dfbench
