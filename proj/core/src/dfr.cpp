#include "dfbench/dfr.hpp"

#include <algorithm>
#include <functional>

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

std::uint64_t SectorToBlock(std::uint64_t sector, const DfrGeometry& g) {
  if (sector < g.partition_start_sector) {
    Fail(ErrorKind::kOutOfPartition,
         "sector " + std::to_string(sector) + " precedes partition start " +
             std::to_string(g.partition_start_sector));
  }
  return sector - g.partition_start_sector;
}

BlockRange BlocksForFile(std::uint64_t start_sector, std::uint64_t file_size,
                         const DfrGeometry& g) {
  if (file_size == 0) Fail(ErrorKind::kInvalidArgument, "file size must be > 0");
  if (g.sector_size == 0 || g.sectors_per_block == 0) {
    Fail(ErrorKind::kInvalidArgument, "degenerate geometry");
  }
  const std::uint64_t start = SectorToBlock(start_sector, g);
  const std::uint64_t unit_bytes =
      static_cast<std::uint64_t>(g.sector_size) * g.sectors_per_block;
  const std::uint64_t units = file_size / unit_bytes + (file_size % unit_bytes != 0);
  return {start, start + units * g.sectors_per_block - 1};
}

BlockSet CanonicalBlocks(std::vector<BlockRange> ranges) {
  std::sort(ranges.begin(), ranges.end());
  BlockSet out;
  for (const auto& r : ranges) {
    if (!out.empty() && (r.start_block <= out.back().end_block ||
                         r.start_block - 1 == out.back().end_block)) {
      out.back().end_block = std::max(out.back().end_block, r.end_block);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

bool BlocksIntersect(const BlockSet& a, const BlockSet& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].end_block < b[j].start_block) {
      ++i;
    } else if (b[j].end_block < a[i].start_block) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

std::string_view DfrValidatorName(DfrValidator v) {
  switch (v) {
    case DfrValidator::kBlocks: return "blocks";
    case DfrValidator::kMacTimes: return "mac_times";
    case DfrValidator::kFileSize: return "file_size";
    case DfrValidator::kFileName: return "file_name";
  }
  return "";
}

std::optional<DfrValidator> DfrValidatorFor(std::string_view test_case) {
  const std::string id = AsciiLower(Trim(test_case));
  const std::string main = AsciiLower(MainTestCase(id));
  if (id == main) return DfrValidator::kBlocks;
  const std::string suffix = id.substr(main.size());
  if (suffix == "-mac") return DfrValidator::kMacTimes;
  if (suffix == "-size") return DfrValidator::kFileSize;
  if (suffix == "-char" || suffix == "-recycle") return DfrValidator::kFileName;
  if (suffix == "-ntfs") return DfrValidator::kBlocks;
  return std::nullopt;
}

namespace {

[[noreturn]] void NoGroundTruth(std::string_view test_case, std::string_view what) {
  Fail(ErrorKind::kUnknownTestCase, "no " + std::string(what) +
                                        " ground truth for '" +
                                        std::string(test_case) + "'");
}

DfrScore Finish(MatchCounts c) { return {c, ComputeMetrics(c)}; }

// Pairing shared by the MAC-time and size validators. `matches` decides
// whether a reported file agrees with a ground-truth record.
DfrScore ScorePaired(
    std::span<const GroundTruthRecord* const> gt,
    std::span<const DfrRecoveredFile> reported,
    const std::function<bool(const DfrRecoveredFile&, const GroundTruthRecord&)>&
        matches) {
  MatchCounts c;
  std::vector<bool> claimed(gt.size(), false);
  std::vector<std::string> gt_names(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i]->file_name) gt_names[i] = NormalizeNfc(*gt[i]->file_name);
  }
  const auto same_name = [&](std::size_t i, const std::string& name) {
    return gt[i]->file_name && gt_names[i] == name;
  };

  std::vector<const DfrRecoveredFile*> unnamed;
  std::vector<std::pair<const DfrRecoveredFile*, std::string>> pending;
  // Agreeing same-name pairs first, so the tally does not depend on the order
  // of reports sharing a name.
  for (const auto& file : reported) {
    if (!file.file_name) {
      unnamed.push_back(&file);
      continue;
    }
    std::string name = NormalizeNfc(*file.file_name);
    bool hit = false;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!claimed[i] && same_name(i, name) && matches(file, *gt[i])) {
        claimed[i] = hit = true;
        break;
      }
    }
    if (hit) {
      ++c.tp;
    } else {
      pending.emplace_back(&file, std::move(name));
    }
  }
  for (const auto& [file, name] : pending) {
    bool paired = false;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!claimed[i] && same_name(i, name)) {
        claimed[i] = paired = true;
        break;
      }
    }
    // A named report that disagrees with its file costs one FP and one FN;
    // the FN is counted here since the file is now claimed.
    ++c.fp;
    if (paired) ++c.fn;
  }

  for (const auto* file : unnamed) {
    bool hit = false;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!claimed[i] && matches(*file, *gt[i])) {
        claimed[i] = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn += static_cast<std::uint64_t>(
      std::count(claimed.begin(), claimed.end(), false));
  return Finish(c);
}

bool TimestampAgrees(const std::optional<Timestamp>& expected,
                     const std::optional<Timestamp>& reported) {
  if (!expected) return true;
  return reported && *reported == *expected;
}

}  // namespace

DfrScore ScoreBlocks(std::string_view test_case,
                     std::span<const GroundTruthRecord> ground_truth,
                     std::span<const BlockSet> recovered) {
  std::vector<BlockSet> expected;
  for (const auto& r : ground_truth) {
    if (r.dfr_blocks && !r.dfr_blocks->empty()) {
      expected.push_back(CanonicalBlocks(*r.dfr_blocks));
    }
  }
  if (expected.empty()) NoGroundTruth(test_case, "block");

  // Canonical order so the tally does not depend on report order.
  std::vector<BlockSet> reports;
  for (const auto& set : recovered) reports.push_back(CanonicalBlocks(set));
  std::sort(reports.begin(), reports.end());

  MatchCounts c;
  std::vector<bool> claimed(expected.size(), false);
  for (const auto& set : reports) {
    bool hit = false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!claimed[i] && expected[i] == set) {
        claimed[i] = true;
        hit = true;
        break;
      }
    }
    // Partial overlap and phantom recoveries are both false positives.
    if (hit) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::uint64_t>(
      std::count(claimed.begin(), claimed.end(), false));
  return Finish(c);
}

DfrScore ScoreMacTimes(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const DfrRecoveredFile> reported) {
  std::vector<const GroundTruthRecord*> gt;
  for (const auto& r : ground_truth) {
    if (r.access_time_stamp || r.modify_time_stamp || r.change_time_stamp) {
      gt.push_back(&r);
    }
  }
  if (gt.empty()) NoGroundTruth(test_case, "MAC-time");
  return ScorePaired(gt, reported,
                     [](const DfrRecoveredFile& f, const GroundTruthRecord& r) {
                       return TimestampAgrees(r.access_time_stamp, f.access_time) &&
                              TimestampAgrees(r.modify_time_stamp, f.modify_time) &&
                              TimestampAgrees(r.change_time_stamp, f.created_time);
                     });
}

DfrScore ScoreFileSize(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const DfrRecoveredFile> reported) {
  std::vector<const GroundTruthRecord*> gt;
  for (const auto& r : ground_truth) {
    if (r.size) gt.push_back(&r);
  }
  if (gt.empty()) NoGroundTruth(test_case, "file-size");
  return ScorePaired(gt, reported,
                     [](const DfrRecoveredFile& f, const GroundTruthRecord& r) {
                       return f.size && *f.size == *r.size;
                     });
}

DfrScore ScoreFileName(std::string_view test_case,
                       std::span<const GroundTruthRecord> ground_truth,
                       std::span<const std::string> reported_names) {
  std::vector<std::string> expected;
  for (const auto& r : ground_truth) {
    if (r.file_name) expected.push_back(NormalizeNfc(*r.file_name));
  }
  if (expected.empty()) NoGroundTruth(test_case, "file-name");

  MatchCounts c;
  std::vector<bool> claimed(expected.size(), false);
  for (const auto& raw : reported_names) {
    const std::string name = NormalizeNfc(raw);
    bool hit = false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!claimed[i] && expected[i] == name) {
        claimed[i] = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::uint64_t>(
      std::count(claimed.begin(), claimed.end(), false));
  return Finish(c);
}

}  // namespace dfbench
