#include "dfbench/records.hpp"

#include <array>

#include "dfbench/error.hpp"
#include "dfbench/fss.hpp"
#include "dfbench/sdr.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

std::string_view FileStatusName(FileStatus s) {
  switch (s) {
    case FileStatus::kActive: return "active";
    case FileStatus::kDeleted: return "deleted";
    case FileStatus::kUnallocated: return "unallocated";
  }
  return "";
}

std::optional<FileStatus> ParseFileStatus(std::string_view text) {
  const std::string t = AsciiLower(Trim(text));
  if (t == "active") return FileStatus::kActive;
  if (t == "deleted") return FileStatus::kDeleted;
  if (t == "unallocated") return FileStatus::kUnallocated;
  return std::nullopt;
}

std::string_view CarveTypeName(CarveType t) {
  switch (t) {
    case CarveType::kContig: return "contig";
    case CarveType::kNon: return "non";
    case CarveType::kFrag: return "frag";
  }
  return "";
}

std::optional<CarveType> ParseCarveType(std::string_view text) {
  const std::string t = AsciiLower(Trim(text));
  if (t == "contig" || t == "conti") return CarveType::kContig;
  if (t == "non") return CarveType::kNon;
  if (t == "frag") return CarveType::kFrag;
  return std::nullopt;
}

std::vector<BlockRange> ParseBlockRanges(std::string_view text) {
  std::vector<BlockRange> out;
  const std::string_view trimmed = Trim(text);
  if (trimmed.empty()) return out;
  for (const auto& part : Split(trimmed, ';')) {
    const std::string_view p = Trim(part);
    const std::size_t dash = p.find('-');
    std::optional<std::uint64_t> lo, hi;
    if (dash == std::string_view::npos) {
      lo = hi = ParseUint(p);
    } else {
      lo = ParseUint(p.substr(0, dash));
      hi = ParseUint(p.substr(dash + 1));
    }
    if (!lo || !hi || *lo > *hi) {
      Fail(ErrorKind::kInvalidArgument,
           "malformed block range '" + std::string(p) + "'");
    }
    out.push_back({*lo, *hi});
  }
  return out;
}

std::string FormatBlockRanges(const std::vector<BlockRange>& ranges) {
  std::string out;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (i > 0) out.push_back(';');
    out += std::to_string(ranges[i].start_block);
    out.push_back('-');
    out += std::to_string(ranges[i].end_block);
  }
  return out;
}

bool IsDfrBlockTestCase(std::string_view test_case) {
  static constexpr std::array<std::string_view, 4> kBlockCases = {
      "DFR-01", "DFR-02", "DFR-03", "DFR-05"};
  const std::string id(Trim(test_case));
  for (auto c : kBlockCases) {
    if (id == c) return true;
  }
  return false;
}

namespace {

[[noreturn]] void Violation(const GroundTruthRecord& r, const std::string& what) {
  Fail(ErrorKind::kSchemaViolation,
       std::string(SuiteName(r.cftt_task)) + " record '" + r.test_case +
           "': " + what);
}

}  // namespace

void ValidateGroundTruth(const GroundTruthRecord& r) {
  if (Trim(r.test_case).empty()) Violation(r, "test_case is empty");
  if (r.dfr_blocks && r.cftt_task != Suite::kDeletedFileRecovery) {
    Violation(r, "dfr_blocks is only valid for deleted_file_recovery");
  }
  if (r.carve_type && r.cftt_task != Suite::kFileCarving) {
    Violation(r, "carve_type is only valid for file_carving");
  }

  switch (r.cftt_task) {
    case Suite::kStringSearch:
      if (!ParseFssPayload(r.payload)) {
        Violation(r, "payload must be '<4-digit identifier>|<line text>'");
      }
      break;
    case Suite::kDeletedFileRecovery: {
      if (IsDfrBlockTestCase(r.test_case) &&
          (!r.dfr_blocks || r.dfr_blocks->empty())) {
        Violation(r, "block test case requires dfr_blocks");
      }
      const bool scoreable =
          (r.dfr_blocks && !r.dfr_blocks->empty()) || r.file_name || r.size ||
          r.access_time_stamp || r.modify_time_stamp || r.change_time_stamp;
      if (!scoreable) Violation(r, "no scoreable field present");
      if (r.dfr_blocks) {
        for (const auto& b : *r.dfr_blocks) {
          if (b.start_block > b.end_block) Violation(r, "inverted block range");
        }
      }
      break;
    }
    case Suite::kFileCarving:
      if (!r.carve_type) Violation(r, "carve_type is required");
      if (Trim(r.payload).empty()) Violation(r, "image path payload is empty");
      break;
    case Suite::kWindowsRegistry:
      if (Trim(r.payload).empty()) Violation(r, "dump path payload is empty");
      break;
    case Suite::kSqlite:
      try {
        ParseSqliteGroundTruth(r.test_case, r.payload);
      } catch (const Error& e) {
        Violation(r, e.what());
      }
      break;
  }
}

std::string NaturalKey(const GroundTruthRecord& r) {
  if (r.cftt_task == Suite::kStringSearch) {
    if (auto p = ParseFssPayload(r.payload)) return p->identifier;
  }
  const auto opt = [](const auto& v, auto&& render) -> std::string {
    return v ? render(*v) : std::string("\x01");
  };
  const auto ts = [](const Timestamp& t) { return std::to_string(t.seconds); };
  const auto str = [](const std::string& s) { return s; };
  std::string key;
  const auto add = [&key](const std::string& part) {
    key += part;
    key.push_back('\x1f');
  };
  add(opt(r.type, [](FileStatus s) { return std::string(FileStatusName(s)); }));
  add(opt(r.os, str));
  add(opt(r.file_name, str));
  add(opt(r.size, [](std::uint64_t s) { return std::to_string(s); }));
  add(opt(r.access_time_stamp, ts));
  add(opt(r.modify_time_stamp, ts));
  add(opt(r.change_time_stamp, ts));
  add(opt(r.deleted_time_stamp, ts));
  add(opt(r.dfr_blocks, FormatBlockRanges));
  add(opt(r.carve_type, [](CarveType t) { return std::string(CarveTypeName(t)); }));
  add(r.payload);
  return key;
}

}  // namespace dfbench
