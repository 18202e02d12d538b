#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfbench/records.hpp"

namespace dfbench {

// Persistence for the three tables: config, ground_truth and the append-only
// test_results log. Implementations serialize writes internally and are safe
// to share between threads.
class Store {
 public:
  virtual ~Store() = default;

  // Upsert keyed by (key, scope).
  virtual void SetConfig(const ConfigEntry& entry) = 0;
  virtual std::optional<std::string> GetConfig(const std::string& key,
                                               const std::string& scope) = 0;
  virtual std::vector<ConfigEntry> ListConfig() = 0;

  // Validates, then inserts. Throws SchemaViolation or DuplicateGroundTruth.
  virtual std::int64_t InsertGroundTruth(const GroundTruthRecord& record) = 0;
  // All-or-nothing: if any record is invalid or a duplicate (of the store or
  // of an earlier record in the batch) nothing is inserted.
  virtual std::vector<std::int64_t> InsertGroundTruthBatch(
      std::span<const GroundTruthRecord> records) = 0;
  // Matching records in insertion order; empty when unknown.
  virtual std::vector<GroundTruthRecord> QueryGroundTruth(
      const std::string& test_case, Suite suite) = 0;
  // Distinct test cases of a suite in first-insertion order.
  virtual std::vector<std::string> ListTestCases(Suite suite) = 0;
  virtual std::size_t CountGroundTruth(std::optional<Suite> suite) = 0;

  // Appends one audit row. Throws ConsistencyViolation when f1 disagrees with
  // ComputeMetrics(counts).f1 by more than 1e-9. An empty job_id is replaced
  // by a fresh token; created_at of 0 is replaced by the current time.
  virtual std::int64_t RecordResult(const TestResultRecord& result) = 0;
  // Chronological; filters are conjunctive.
  virtual std::vector<TestResultRecord> ListResults(
      const ResultFilter& filter) = 0;
};

// Embedded SQLite-backed store. `path` may be ":memory:". Tables are created
// if absent.
std::unique_ptr<Store> OpenSqliteStore(const std::string& path);

// Random 128-bit hex token for job correlation.
std::string NewJobId();

}  // namespace dfbench
