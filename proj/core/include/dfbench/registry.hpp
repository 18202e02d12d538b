#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dfbench/metrics.hpp"

namespace dfbench {

struct RegistryRow {
  std::string path;
  std::string type;
  std::string value;
  std::string mtime;

  friend bool operator==(const RegistryRow&, const RegistryRow&) = default;
};

// Separators unified to '\' with runs collapsed, every field trimmed, path
// and type case-folded, value kept as is, mtime rewritten as
// "YYYY-MM-DDTHH:MM:SSZ" (empty when unparseable).
RegistryRow NormalizeRow(const RegistryRow& row);

struct RegistryOptions {
  // When false (the default) MTIME is not part of row identity.
  bool compare_mtime = false;
};

// Normalized, deduplicated rows keyed by their identity string.
class RegistryDump {
 public:
  explicit RegistryDump(RegistryOptions options = {}) : options_(options) {}

  // Rows with an empty normalized path are ignored.
  void Add(const RegistryRow& row);
  std::size_t size() const { return keys_.size(); }
  bool Contains(const std::string& key) const { return keys_.count(key) != 0; }
  const std::unordered_set<std::string>& keys() const { return keys_; }
  const RegistryOptions& options() const { return options_; }

 private:
  RegistryOptions options_;
  std::unordered_set<std::string> keys_;
};

// Reads a dump with header exactly "PATH,TYPE,VALUE,MTIME". Throws
// ParseError with the offending line; the file variant throws
// GroundTruthUnavailable when the file cannot be opened.
std::vector<RegistryRow> ReadRegistryRows(std::istream& in);
std::vector<RegistryRow> ReadRegistryRowsFile(const std::string& path);
RegistryDump ReadRegistryDump(std::istream& in, RegistryOptions options = {});

// Binary data as lowercase hex without separators; multi-string values
// joined by a single linefeed.
std::string RenderBinaryValue(std::span<const std::uint8_t> data);
std::string RenderMultiString(const std::vector<std::string>& parts);

struct RegistryScore {
  MatchCounts counts;
  Metrics metrics;
};

// TP: rows in both; FN: ground-truth rows missing from the tool dump;
// FP: tool rows absent from the ground truth.
RegistryScore ScoreRegistry(const RegistryDump& tool_dump,
                            const RegistryDump& ground_truth);

}  // namespace dfbench
