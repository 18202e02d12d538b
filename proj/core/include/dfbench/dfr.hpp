#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfbench/metrics.hpp"
#include "dfbench/records.hpp"

namespace dfbench {

struct DfrGeometry {
  std::uint64_t partition_start_sector = 0;
  std::uint32_t sector_size = 512;
  std::uint32_t sectors_per_block = 1;
};

// Block index of an absolute sector: s - PS, with no division by
// sectors_per_block, so block sets are expressed at sector granularity.
// Throws OutOfPartition when s < PS.
std::uint64_t SectorToBlock(std::uint64_t sector, const DfrGeometry& geometry);

// Range a file of `file_size` bytes starting at `start_sector` occupies.
// The file takes ceil(size / (sector_size * sectors_per_block)) allocation
// units, each sectors_per_block indices wide. Throws InvalidArgument when
// file_size is 0 or the geometry is degenerate, OutOfPartition as above.
BlockRange BlocksForFile(std::uint64_t start_sector, std::uint64_t file_size,
                         const DfrGeometry& geometry);

// Sorted, merged representation; two files have the same blocks iff their
// canonical forms compare equal.
using BlockSet = std::vector<BlockRange>;
BlockSet CanonicalBlocks(std::vector<BlockRange> ranges);
bool BlocksIntersect(const BlockSet& a, const BlockSet& b);

struct DfrRecoveredFile {
  std::optional<std::string> file_name;
  std::optional<std::uint64_t> size;
  std::optional<Timestamp> access_time;
  std::optional<Timestamp> modify_time;
  // Compared against the ground truth's change_time_stamp.
  std::optional<Timestamp> created_time;
  std::optional<std::vector<BlockRange>> blocks;
};

enum class DfrValidator { kBlocks, kMacTimes, kFileSize, kFileName };

std::string_view DfrValidatorName(DfrValidator v);

// Sub-test-case suffix routing: -MAC, -SIZE, -CHAR and -RECYCLE select the
// MAC-time, size and file-name validators; a bare id or -NTFS scores blocks.
// nullopt for an unrecognised suffix.
std::optional<DfrValidator> DfrValidatorFor(std::string_view test_case);

struct DfrScore {
  MatchCounts counts;
  Metrics metrics;
};

// All scorers take the ground-truth records of one test case. They throw
// UnknownTestCase when no record carries the field they validate.

// Each recovered set exactly equal to an unclaimed ground-truth set is a TP;
// every other recovered set (partial overlap or none at all) is an FP.
// Ground-truth sets never matched are FNs. A ground-truth set is claimed at
// most once.
DfrScore ScoreBlocks(std::string_view test_case,
                     std::span<const GroundTruthRecord> ground_truth,
                     std::span<const BlockSet> recovered);

// A file is a TP only when every timestamp the ground truth carries is
// reported and equal at one-second resolution. Named reports pair with the
// ground-truth file of the same (NFC) name, a failed comparison then counting
// one FP and one FN; unnamed reports match any unclaimed file whose
// timestamps all agree, otherwise FP.
DfrScore ScoreMacTimes(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const DfrRecoveredFile> reported);

// Exact byte-count equality, paired the same way as ScoreMacTimes.
DfrScore ScoreFileSize(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const DfrRecoveredFile> reported);

// Exact match after NFC normalization; multiset semantics.
DfrScore ScoreFileName(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const std::string> reported_names);

}  // namespace dfbench
