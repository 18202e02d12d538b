#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfbench/carving.hpp"
#include "dfbench/dfr.hpp"
#include "dfbench/fss.hpp"
#include "dfbench/metrics.hpp"
#include "dfbench/registry.hpp"
#include "dfbench/sdr.hpp"
#include "dfbench/store.hpp"

namespace dfbench {

// Fields shared by every evaluation request.
struct RequestInfo {
  std::string test_case;
  std::string tool;
  std::string job_id;
};

struct FssRequest {
  RequestInfo info;
  std::string os;
  std::optional<FileStatus> file_status;
  std::vector<std::string> lines;
};

struct DfrRequest {
  RequestInfo info;
  std::vector<DfrRecoveredFile> files;
};

struct CarvingRequest {
  RequestInfo info;
  std::vector<CarvedFile> files;
};

struct RegistryRequest {
  RequestInfo info;
  std::vector<RegistryRow> rows;
};

struct SqliteRequest {
  RequestInfo info;
  SqliteReport report;
};

struct Evaluation {
  std::string test_case;
  std::string tool;
  std::string job_id;
  MatchCounts counts;
  Metrics metrics;
  // Carving only.
  std::vector<CarvingVerdict> verdicts;
};

struct EvaluatorOptions {
  CarvingOptions carving;
  RegistryOptions registry;
  bool strict_sft03 = false;
  // Append a TestResultRecord per evaluation.
  bool record_results = true;
};

// Resolves ground truth from the store, runs the suite scorer and appends
// the result. The HTTP service and the batch pipeline both go through this
// class, so they agree exactly.
//
// Ground truth is looked up under the exact test-case id first and then
// under its main test case. Relative artifact paths in payloads resolve
// against the "source_dir" config entry of the suite, then the global one.
//
// Errors: UnknownTestCase when no ground truth exists, ShapeMismatch when
// the request lacks the fields its test case needs, GroundTruthUnavailable
// when a referenced artifact cannot be read.
class Evaluator {
 public:
  explicit Evaluator(Store& store, EvaluatorOptions options = {});

  Evaluation Evaluate(const FssRequest& request);
  Evaluation Evaluate(const DfrRequest& request);
  Evaluation Evaluate(const CarvingRequest& request);
  Evaluation Evaluate(const RegistryRequest& request);
  Evaluation Evaluate(const SqliteRequest& request);

  const EvaluatorOptions& options() const { return options_; }

 private:
  std::vector<GroundTruthRecord> GroundTruth(const std::string& test_case, Suite suite);
  std::string ResolvePath(const std::string& path, Suite suite);
  Evaluation Finish(const RequestInfo& info, MatchCounts counts);

  Store& store_;
  EvaluatorOptions options_;
};

}  // namespace dfbench
