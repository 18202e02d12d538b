#include "dfbench/fss.hpp"

#include <set>

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::optional<std::string> ExtractIdentifier(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size()) {
    if (!IsDigit(line[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && IsDigit(line[j])) ++j;
    if (j - i == 4) return std::string(line.substr(i, 4));
    i = j;
  }
  return std::nullopt;
}

std::optional<FssPayload> ParseFssPayload(std::string_view payload) {
  const std::size_t bar = payload.find('|');
  if (bar != 4) return std::nullopt;
  const std::string_view id = payload.substr(0, 4);
  for (char c : id) {
    if (!IsDigit(c)) return std::nullopt;
  }
  return FssPayload{std::string(id), std::string(payload.substr(5))};
}

std::string FormatFssPayload(const FssPayload& p) {
  return p.identifier + "|" + p.line_text;
}

std::vector<std::string> SplitReportedLines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

FssScore ScoreStringSearch(const FssReport& report,
                           std::span<const FssGroundTruthHit> ground_truth) {
  const std::string os = AsciiLower(Trim(report.os));
  std::set<std::string> expected;
  for (const auto& hit : ground_truth) {
    if (!os.empty() && !hit.os.empty() && AsciiLower(Trim(hit.os)) != os) {
      continue;
    }
    if (report.file_status && hit.file_status &&
        *hit.file_status != *report.file_status) {
      continue;
    }
    expected.insert(hit.identifier);
  }
  if (expected.empty()) {
    Fail(ErrorKind::kUnknownTestCase,
         "no string-search ground truth for '" + report.test_case +
             "' on os '" + report.os + "'");
  }

  std::set<std::string> reported_ids;
  std::set<std::string> unidentified;
  for (const auto& raw : report.reported_lines) {
    std::string_view line = raw;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line.empty()) continue;
    if (auto id = ExtractIdentifier(line)) {
      reported_ids.insert(*id);
    } else {
      unidentified.emplace(line);
    }
  }

  FssScore out;
  for (const auto& id : reported_ids) {
    if (expected.count(id)) {
      ++out.counts.tp;
    } else {
      ++out.counts.fp;
    }
  }
  out.counts.fp += unidentified.size();
  out.counts.fn = expected.size() - out.counts.tp;
  out.metrics = ComputeMetrics(out.counts);
  return out;
}

std::vector<FssGroundTruthHit> FssHitsFromRecords(
    std::span<const GroundTruthRecord> records) {
  std::vector<FssGroundTruthHit> hits;
  for (const auto& r : records) {
    auto p = ParseFssPayload(r.payload);
    if (!p) continue;
    hits.push_back({p->identifier, p->line_text, r.test_case,
                    r.os.value_or(""), r.type});
  }
  return hits;
}

}  // namespace dfbench
