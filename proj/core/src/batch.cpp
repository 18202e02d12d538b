#include "dfbench/batch.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "dfbench/csv.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

namespace fs = std::filesystem;

namespace {

using AnyRequest = std::variant<FssRequest, DfrRequest, CarvingRequest, RegistryRequest,
                                SqliteRequest>;

struct Group {
  std::size_t line = 0;
  AnyRequest request;
};

RequestInfo& Info(AnyRequest& r) {
  return std::visit([](auto& x) -> RequestInfo& { return x.info; }, r);
}

class Row {
 public:
  Row(const CsvTable& t, const CsvRecord& r) : table_(t), rec_(r) {}
  std::string Get(std::string_view column) const {
    return std::string(Trim(CsvTable::Field(rec_, table_.Column(column))));
  }
  std::string Raw(std::string_view column) const {
    return std::string(CsvTable::Field(rec_, table_.Column(column)));
  }
  [[noreturn]] void Bad(const std::string& msg) const { FailParse(table_.line(), msg); }
  std::optional<Timestamp> Time(std::string_view column) const {
    const std::string v = Get(column);
    if (v.empty()) return std::nullopt;
    auto t = ParseTimestamp(v);
    if (!t) Bad("'" + std::string(column) + "' is not a timestamp");
    return t;
  }

 private:
  const CsvTable& table_;
  const CsvRecord& rec_;
};

std::string Resolve(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base_dir) / p).string();
}

std::vector<std::uint8_t> ReadInput(const Row& row, const std::string& path) {
  auto bytes = ReadFileBytes(path);
  if (!bytes) row.Bad("cannot read '" + path + "'");
  return std::move(*bytes);
}

AnyRequest EmptyRequest(Suite suite) {
  switch (suite) {
    case Suite::kStringSearch: return FssRequest{};
    case Suite::kDeletedFileRecovery: return DfrRequest{};
    case Suite::kFileCarving: return CarvingRequest{};
    case Suite::kWindowsRegistry: return RegistryRequest{};
    case Suite::kSqlite: return SqliteRequest{};
  }
  return FssRequest{};
}

void AddFinding(AnyRequest& req, const Row& row, const std::string& base_dir, bool fresh) {
  if (auto* r = std::get_if<FssRequest>(&req)) {
    const std::string line = row.Raw("line");
    for (auto& l : SplitReportedLines(line)) r->lines.push_back(std::move(l));
  } else if (auto* r = std::get_if<DfrRequest>(&req)) {
    DfrRecoveredFile f;
    if (auto v = row.Get("file_name"); !v.empty()) f.file_name = v;
    if (auto v = row.Get("size"); !v.empty()) {
      f.size = ParseUint(v);
      if (!f.size) row.Bad("'size' is not a non-negative integer");
    }
    f.access_time = row.Time("access_time");
    f.modify_time = row.Time("modify_time");
    f.created_time = row.Time("created_time");
    if (auto v = row.Get("blocks"); !v.empty()) {
      try {
        f.blocks = ParseBlockRanges(v);
      } catch (const Error& e) {
        row.Bad(e.what());
      }
    }
    const bool empty = !f.file_name && !f.size && !f.access_time && !f.modify_time &&
                       !f.created_time && !f.blocks;
    if (!empty) r->files.push_back(std::move(f));
  } else if (auto* r = std::get_if<CarvingRequest>(&req)) {
    if (auto v = row.Get("path"); !v.empty()) {
      const std::string path = Resolve(base_dir, v);
      r->files.push_back({BaseName(v), ReadInput(row, path), std::nullopt});
    }
  } else if (auto* r = std::get_if<RegistryRequest>(&req)) {
    if (auto v = row.Get("dump_path"); !v.empty()) {
      const std::string path = Resolve(base_dir, v);
      const auto text = ReadInput(row, path);
      std::istringstream in(std::string(text.begin(), text.end()));
      try {
        for (auto& rr : ReadRegistryRows(in)) r->rows.push_back(std::move(rr));
      } catch (const Error& e) {
        row.Bad(path + ": " + e.what());
      }
    }
    if (!row.Get("PATH").empty()) {
      r->rows.push_back({row.Raw("PATH"), row.Raw("TYPE"), row.Raw("VALUE"), row.Raw("MTIME")});
    }
  } else if (auto* r = std::get_if<SqliteRequest>(&req)) {
    if (!fresh) row.Bad("an SQLite test case takes exactly one report row");
    const std::string json = row.Raw("report");
    if (Trim(json).empty()) row.Bad("missing 'report'");
    try {
      r->report = ParseSqliteReport(r->info.test_case, json);
    } catch (const Error& e) {
      row.Bad(e.what());
    }
  }
}

std::string Score(double v, const BatchOptions& options) {
  if (!options.exact_scores) return FormatScore(v);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string WithLine(std::size_t line, const Error& e) {
  if (e.line() != 0) return e.what();
  return "line " + std::to_string(line) + ": " + e.what();
}

}  // namespace

BatchReport RunBatch(Evaluator& evaluator, const std::string& test_case, std::istream& in,
                     const std::string& base_dir) {
  const auto suite = SuiteForTestCase(test_case);
  if (!suite) Fail(ErrorKind::kUnknownTestCase, "unknown test case '" + test_case + "'");
  const std::string main = MainTestCase(test_case);

  CsvTable table(in);
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  CsvRecord rec;
  while (table.Next(rec)) {
    const Row row(table, rec);
    std::string tc = row.Get("test_case");
    if (tc.empty()) tc = test_case;
    if (AsciiLower(MainTestCase(tc)) != AsciiLower(main)) {
      row.Bad("test case '" + tc + "' does not belong to '" + main + "'");
    }
    const std::string tool = row.Get("tool");
    std::string key = tc + '\x1f' + tool;
    std::optional<FileStatus> status;
    std::string os;
    if (*suite == Suite::kStringSearch) {
      os = row.Get("os");
      if (os.empty()) row.Bad("missing 'os'");
      if (auto v = row.Get("file_status"); !v.empty()) {
        status = ParseFileStatus(v);
        if (!status) row.Bad("unknown file_status '" + v + "'");
      }
      key += '\x1f' + AsciiLower(os) + '\x1f' +
             (status ? std::string(FileStatusName(*status)) : std::string());
    }

    auto [it, fresh] = index.try_emplace(key, groups.size());
    if (fresh) {
      Group g{table.line(), EmptyRequest(*suite)};
      Info(g.request) = {tc, tool, row.Get("job_id")};
      if (auto* f = std::get_if<FssRequest>(&g.request)) {
        f->os = os;
        f->file_status = status;
      }
      groups.push_back(std::move(g));
    }
    AddFinding(groups[it->second].request, row, base_dir, fresh);
  }

  BatchReport report;
  report.suite = *suite;
  for (const Group& g : groups) {
    try {
      report.rows.push_back(
          std::visit([&](const auto& r) { return evaluator.Evaluate(r); }, g.request));
    } catch (const Error& e) {
      throw Error(e.kind(), WithLine(g.line, e), e.line() ? e.line() : g.line);
    }
  }
  return report;
}

std::string FormatBatchReport(const BatchReport& report, const BatchOptions& options) {
  if (report.rows.empty()) Fail(ErrorKind::kEmptySuite, "no test cases were evaluated");
  std::ostringstream out;
  WriteCsvRecord(out, {"test_case", "tool", "tp", "fp", "fn", "precision", "recall", "f1"});
  std::vector<std::string> tools;
  for (const auto& e : report.rows) {
    WriteCsvRecord(out, {e.test_case, e.tool, std::to_string(e.counts.tp),
                         std::to_string(e.counts.fp), std::to_string(e.counts.fn),
                         Score(e.metrics.precision, options), Score(e.metrics.recall, options),
                         Score(e.metrics.f1, options)});
    if (std::find(tools.begin(), tools.end(), e.tool) == tools.end()) tools.push_back(e.tool);
  }
  const std::string label = "AutoDFBench-" + std::string(SuiteAbbreviation(report.suite));
  for (const auto& tool : tools) {
    std::vector<CaseMetrics> cases;
    for (const auto& e : report.rows) {
      if (e.tool == tool) cases.push_back({e.test_case, e.metrics});
    }
    const SuiteScore s = AggregateSuiteByMainCase(report.suite, cases);
    WriteCsvRecord(out, {label, tool, "", "", "", "", "", Score(s.score, options)});
  }
  return out.str();
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kSchemaViolation:
    case ErrorKind::kEmptySuite:
    case ErrorKind::kNotDecodable:
    case ErrorKind::kNotSqlite:
    case ErrorKind::kTruncated:
    case ErrorKind::kPayloadTooLarge:
      return 1;
    case ErrorKind::kUnknownTestCase:
    case ErrorKind::kGroundTruthUnavailable:
    case ErrorKind::kOutOfPartition:
    case ErrorKind::kDuplicateGroundTruth:
    case ErrorKind::kIncompleteBench:
      return 2;
    case ErrorKind::kConsistencyViolation:
    case ErrorKind::kStorage:
      return 3;
  }
  return 3;
}

namespace {

BatchReport RunOne(Evaluator& evaluator, const std::string& test_case,
                   const std::string& input_csv) {
  std::ifstream in(input_csv, std::ios::binary);
  if (!in) Fail(ErrorKind::kInvalidArgument, "cannot read '" + input_csv + "'");
  const std::string base = fs::absolute(fs::path(input_csv)).parent_path().string();
  return RunBatch(evaluator, test_case, in, base);
}

BatchFailure Failure(const std::string& input, const std::exception& e) {
  BatchFailure f{input, e.what(), 3};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    f.exit_code = ExitCodeFor(err->kind());
    f.message = std::string(ErrorKindName(err->kind())) + ": " + err->what();
  }
  return f;
}

}  // namespace

BatchOutcome RunBatchFile(Evaluator& evaluator, const std::string& test_case,
                          const std::string& input_csv, const std::string& output_report,
                          const BatchOptions& options) {
  BatchOutcome outcome;
  try {
    const BatchReport report = RunOne(evaluator, test_case, input_csv);
    WriteFileAtomic(output_report, FormatBatchReport(report, options));
  } catch (const std::exception& e) {
    outcome.failures.push_back(Failure(input_csv, e));
    outcome.exit_code = outcome.failures.back().exit_code;
  }
  return outcome;
}

BatchOutcome RunSuiteDir(Evaluator& evaluator, Suite suite, const std::string& input_dir,
                         const std::string& output_report, const BatchOptions& options) {
  BatchOutcome outcome;
  std::vector<fs::path> inputs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(input_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      inputs.push_back(entry.path());
    }
  }
  if (ec) {
    outcome.failures.push_back({input_dir, "cannot read directory: " + ec.message(), 1});
    outcome.exit_code = 1;
    return outcome;
  }
  std::sort(inputs.begin(), inputs.end());

  const fs::path cases_dir = fs::path(output_report).string() + ".cases";
  BatchReport combined;
  combined.suite = suite;
  for (const auto& input : inputs) {
    const std::string test_case = input.stem().string();
    try {
      if (SuiteForTestCase(test_case) != suite) {
        Fail(ErrorKind::kUnknownTestCase, "'" + test_case + "' is not a " +
                                              std::string(SuiteName(suite)) + " test case");
      }
      BatchReport report = RunOne(evaluator, test_case, input.string());
      fs::create_directories(cases_dir);
      WriteFileAtomic((cases_dir / (test_case + ".csv")).string(),
                      FormatBatchReport(report, options));
      for (auto& row : report.rows) combined.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      outcome.failures.push_back(Failure(input.string(), e));
    }
  }

  try {
    WriteFileAtomic(output_report, FormatBatchReport(combined, options));
  } catch (const std::exception& e) {
    outcome.failures.push_back(Failure(input_dir, e));
  }
  if (!outcome.failures.empty()) {
    outcome.exit_code = std::max_element(outcome.failures.begin(), outcome.failures.end(),
                                         [](const auto& a, const auto& b) {
                                           return a.exit_code < b.exit_code;
                                         })
                            ->exit_code;
  }
  return outcome;
}

}  // namespace dfbench
