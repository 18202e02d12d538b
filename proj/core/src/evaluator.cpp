#include "dfbench/evaluator.hpp"

#include <filesystem>

#include "dfbench/error.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/suite.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

namespace {

void RequireSuite(const std::string& test_case, Suite suite) {
  if (SuiteForTestCase(test_case) != suite) {
    Fail(ErrorKind::kUnknownTestCase, "'" + test_case + "' is not a " +
                                          std::string(SuiteName(suite)) + " test case");
  }
}

std::optional<ImageFormat> FormatForCarveCase(std::string_view test_case) {
  const auto parts = Split(MainTestCase(test_case), '-');
  if (parts.size() < 3) return std::nullopt;
  return ParseImageFormat(parts.back());
}

}  // namespace

Evaluator::Evaluator(Store& store, EvaluatorOptions options)
    : store_(store), options_(options) {}

std::vector<GroundTruthRecord> Evaluator::GroundTruth(const std::string& test_case,
                                                      Suite suite) {
  RequireSuite(test_case, suite);
  auto records = store_.QueryGroundTruth(test_case, suite);
  if (records.empty()) {
    const std::string main = MainTestCase(test_case);
    if (main != test_case) records = store_.QueryGroundTruth(main, suite);
  }
  if (records.empty()) {
    Fail(ErrorKind::kUnknownTestCase, "no ground truth for test case '" + test_case + "'");
  }
  return records;
}

std::string Evaluator::ResolvePath(const std::string& path, Suite suite) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.is_absolute()) return path;
  auto base = store_.GetConfig("source_dir", std::string(SuiteName(suite)));
  if (!base) base = store_.GetConfig("source_dir", "global");
  if (!base) return path;
  return (fs::path(*base) / p).string();
}

Evaluation Evaluator::Finish(const RequestInfo& info, MatchCounts counts) {
  Evaluation e;
  e.test_case = info.test_case;
  e.tool = Trim(info.tool).empty() ? "unspecified" : std::string(Trim(info.tool));
  e.job_id = info.job_id.empty() ? NewJobId() : info.job_id;
  e.counts = counts;
  e.metrics = ComputeMetrics(counts);
  if (options_.record_results) {
    TestResultRecord r;
    r.test_case = e.test_case;
    r.tool = e.tool;
    r.job_id = e.job_id;
    r.counts = e.counts;
    r.f1 = e.metrics.f1;
    store_.RecordResult(r);
  }
  return e;
}

Evaluation Evaluator::Evaluate(const FssRequest& request) {
  if (Trim(request.os).empty()) Fail(ErrorKind::kShapeMismatch, "missing field 'os'");
  const auto records = GroundTruth(request.info.test_case, Suite::kStringSearch);
  const auto hits = FssHitsFromRecords(records);
  FssReport report;
  report.test_case = request.info.test_case;
  report.os = request.os;
  report.file_status = request.file_status;
  report.reported_lines = request.lines;
  return Finish(request.info, ScoreStringSearch(report, hits).counts);
}

Evaluation Evaluator::Evaluate(const DfrRequest& request) {
  const std::string& tc = request.info.test_case;
  const auto validator = DfrValidatorFor(tc);
  if (!validator) Fail(ErrorKind::kUnknownTestCase, "unrecognised DFR sub-test case '" + tc + "'");
  const auto records = GroundTruth(tc, Suite::kDeletedFileRecovery);

  const auto missing = [](const char* field) {
    Fail(ErrorKind::kShapeMismatch, std::string("every file needs '") + field + "'");
  };
  DfrScore score;
  switch (*validator) {
    case DfrValidator::kBlocks: {
      std::vector<BlockSet> sets;
      for (const auto& f : request.files) {
        if (!f.blocks) missing("blocks");
        sets.push_back(CanonicalBlocks(*f.blocks));
      }
      score = ScoreBlocks(tc, records, sets);
      break;
    }
    case DfrValidator::kMacTimes:
      for (const auto& f : request.files) {
        if (!f.access_time && !f.modify_time && !f.created_time) missing("a timestamp");
      }
      score = ScoreMacTimes(tc, records, request.files);
      break;
    case DfrValidator::kFileSize:
      for (const auto& f : request.files) {
        if (!f.size) missing("size");
      }
      score = ScoreFileSize(tc, records, request.files);
      break;
    case DfrValidator::kFileName: {
      std::vector<std::string> names;
      for (const auto& f : request.files) {
        if (!f.file_name) missing("file_name");
        names.push_back(*f.file_name);
      }
      score = ScoreFileName(tc, records, names);
      break;
    }
  }
  return Finish(request.info, score.counts);
}

Evaluation Evaluator::Evaluate(const CarvingRequest& request) {
  const auto records = GroundTruth(request.info.test_case, Suite::kFileCarving);
  std::vector<GroundTruthImage> truth;
  for (const auto& r : records) {
    const std::string path = ResolvePath(r.payload, Suite::kFileCarving);
    auto bytes = ReadFileBytes(path);
    if (!bytes) {
      Fail(ErrorKind::kGroundTruthUnavailable, "cannot read ground-truth image '" + path + "'");
    }
    auto format = FormatForCarveCase(r.test_case);
    if (!format) format = DetectImageFormat(*bytes);
    truth.push_back({BaseName(r.payload), std::move(*bytes), format});
  }
  CarvingScore score = ScoreCarving(truth, request.files, options_.carving);
  Evaluation e = Finish(request.info, score.counts);
  e.verdicts = std::move(score.verdicts);
  return e;
}

Evaluation Evaluator::Evaluate(const RegistryRequest& request) {
  const auto records = GroundTruth(request.info.test_case, Suite::kWindowsRegistry);
  RegistryDump truth(options_.registry);
  for (const auto& r : records) {
    const std::string path = ResolvePath(r.payload, Suite::kWindowsRegistry);
    for (const auto& row : ReadRegistryRowsFile(path)) truth.Add(row);
  }
  RegistryDump reported(options_.registry);
  for (const auto& row : request.rows) reported.Add(row);
  return Finish(request.info, ScoreRegistry(reported, truth).counts);
}

Evaluation Evaluator::Evaluate(const SqliteRequest& request) {
  const std::string& tc = request.info.test_case;
  const SftKind kind = SftKindForTestCase(tc);
  const auto records = GroundTruth(tc, Suite::kSqlite);
  if (static_cast<int>(kind) != static_cast<int>(request.report.index()) + 1) {
    Fail(ErrorKind::kShapeMismatch, "payload shape does not match test case '" + tc + "'");
  }

  std::optional<SqliteReport> truth;
  for (const auto& r : records) {
    SqliteReport candidate = ParseSqliteGroundTruth(r.test_case, r.payload);
    if (kind == SftKind::kRowRecovery) {
      const auto& want = std::get<SqliteRowRecoveryReport>(request.report).database_name;
      if (std::get<SqliteRowRecoveryReport>(candidate).database_name != want) continue;
    }
    truth = std::move(candidate);
    break;
  }
  if (!truth) truth = ParseSqliteGroundTruth(records.front().test_case, records.front().payload);
  return Finish(request.info,
                ScoreSqlite(*truth, request.report, options_.strict_sft03).counts);
}

}  // namespace dfbench
