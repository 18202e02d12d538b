#pragma once

#include <istream>
#include <string>
#include <vector>

#include "dfbench/error.hpp"
#include "dfbench/evaluator.hpp"
#include "dfbench/suite.hpp"

namespace dfbench {

// Batch input is a CSV with a header row, one claimed finding per row.
// Every suite accepts optional test_case, tool and job_id columns; the
// remaining columns are suite specific:
//
//   string_search          os, file_status (optional), line
//   deleted_file_recovery  file_name, size, access_time, modify_time,
//                          created_time, blocks ("0-63;128-130")
//   file_carving           path (carved file)
//   windows_registry       PATH, TYPE, VALUE, MTIME, or dump_path
//   sqlite                 report (JSON object as for the HTTP endpoint)
//
// Paths resolve against the input file's directory. Rows are grouped by
// (test_case, tool), and for string search also by os and file_status, in
// order of first appearance; each group is one evaluation. A row whose
// payload cells are all empty contributes no finding but still creates its
// group, so "nothing found" is expressible.
struct BatchOptions {
  // Scores rendered with 17 significant digits instead of six decimals, so
  // the report round-trips the exact doubles.
  bool exact_scores = false;
};

struct BatchReport {
  Suite suite = Suite::kStringSearch;
  std::vector<Evaluation> rows;
};

// Evaluates every group of `in`. `test_case` fills rows without a
// test_case cell; rows naming a test case from a different main test case
// are rejected. Throws ParseError with the offending line.
BatchReport RunBatch(Evaluator& evaluator, const std::string& test_case,
                     std::istream& in, const std::string& base_dir);

// CSV "test_case,tool,tp,fp,fn,precision,recall,f1", one row per
// evaluation, then one "AutoDFBench-<ABBR>" summary row per tool holding
// the suite score in the f1 column. Throws EmptySuite when there are no
// rows.
std::string FormatBatchReport(const BatchReport& report, const BatchOptions& options = {});

// Process exit status for an error: 1 input, 2 ground truth, 3 internal.
int ExitCodeFor(ErrorKind kind);

struct BatchFailure {
  std::string input;
  std::string message;
  int exit_code = 3;
};

struct BatchOutcome {
  int exit_code = 0;
  std::vector<BatchFailure> failures;
};

// run_batch: reads `input_csv`, writes the report to `output_report`.
BatchOutcome RunBatchFile(Evaluator& evaluator, const std::string& test_case,
                          const std::string& input_csv, const std::string& output_report,
                          const BatchOptions& options = {});

// run_suite: every *.csv in `input_dir` (name order) is one batch whose
// default test case is the file stem. Successful files get a per-case
// report in "<output_report>.cases/"; the combined report holds all their
// rows plus the summary. A failing file is listed in the outcome and makes
// the exit status nonzero without stopping the others. An empty directory
// is EmptySuite.
BatchOutcome RunSuiteDir(Evaluator& evaluator, Suite suite, const std::string& input_dir,
                         const std::string& output_report,
                         const BatchOptions& options = {});

}  // namespace dfbench
