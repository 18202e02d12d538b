#include "dfbench/registry.hpp"

#include <fstream>

#include "dfbench/csv.hpp"
#include "dfbench/error.hpp"
#include "dfbench/text.hpp"
#include "dfbench/timestamp.hpp"

namespace dfbench {

RegistryRow NormalizeRow(const RegistryRow& row) {
  RegistryRow out;
  std::string path;
  for (char c : Trim(row.path)) {
    if (c == '/') c = '\\';
    if (c == '\\' && !path.empty() && path.back() == '\\') continue;
    path.push_back(c);
  }
  out.path = FoldCase(path);
  out.type = FoldCase(Trim(row.type));
  out.value = std::string(Trim(row.value));
  if (auto ts = ParseTimestamp(row.mtime)) out.mtime = FormatTimestamp(*ts);
  return out;
}

void RegistryDump::Add(const RegistryRow& row) {
  const RegistryRow n = NormalizeRow(row);
  if (n.path.empty()) return;
  std::string key = n.path;
  key.push_back('\x1f');
  key += n.type;
  key.push_back('\x1f');
  key += n.value;
  if (options_.compare_mtime) {
    key.push_back('\x1f');
    key += n.mtime;
  }
  keys_.insert(std::move(key));
}

std::vector<RegistryRow> ReadRegistryRows(std::istream& in) {
  CsvReader reader(in);
  CsvRecord record;
  if (!reader.Next(record)) FailParse(1, "missing header row");
  const std::vector<std::string> expected = {"PATH", "TYPE", "VALUE", "MTIME"};
  std::vector<std::string> header;
  for (const auto& h : record) header.emplace_back(Trim(h));
  if (header != expected) {
    FailParse(reader.line(), "header must be PATH,TYPE,VALUE,MTIME");
  }
  std::vector<RegistryRow> rows;
  while (reader.Next(record)) {
    if (record.size() != 4) {
      FailParse(reader.line(), "expected 4 fields, found " + std::to_string(record.size()));
    }
    rows.push_back({record[0], record[1], record[2], record[3]});
  }
  return rows;
}

std::vector<RegistryRow> ReadRegistryRowsFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kGroundTruthUnavailable, "cannot read registry dump '" + path + "'");
  return ReadRegistryRows(in);
}

RegistryDump ReadRegistryDump(std::istream& in, RegistryOptions options) {
  RegistryDump dump(options);
  for (const auto& row : ReadRegistryRows(in)) dump.Add(row);
  return dump;
}

std::string RenderBinaryValue(std::span<const std::uint8_t> data) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

std::string RenderMultiString(const std::vector<std::string>& parts) {
  return Join(parts, "\n");
}

RegistryScore ScoreRegistry(const RegistryDump& tool_dump,
                            const RegistryDump& ground_truth) {
  RegistryScore out;
  for (const auto& key : tool_dump.keys()) {
    if (ground_truth.Contains(key)) {
      ++out.counts.tp;
    } else {
      ++out.counts.fp;
    }
  }
  out.counts.fn = ground_truth.size() - out.counts.tp;
  out.metrics = ComputeMetrics(out.counts);
  return out;
}

}  // namespace dfbench
