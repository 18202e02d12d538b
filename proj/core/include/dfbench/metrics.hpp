#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfbench/suite.hpp"

namespace dfbench {

struct MatchCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
  friend MatchCounts operator+(MatchCounts a, const MatchCounts& b) {
    return a += b;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Precision, recall and F1 from raw counts.
//
// Degenerate cases: an all-zero tally is vacuous agreement and scores 1
// across the board; otherwise any ratio with a zero denominator is 0, and
// F1 is 0 whenever precision + recall is 0.
Metrics ComputeMetrics(const MatchCounts& counts);

struct CaseMetrics {
  std::string test_case;
  Metrics metrics;
};

struct SuiteScore {
  Suite suite = Suite::kStringSearch;
  std::vector<CaseMetrics> per_case;
  double score = 0.0;
};

struct BenchScore {
  std::vector<SuiteScore> suite_scores;
  double score = 0.0;
};

// Unweighted mean of per-case F1. Throws EmptySuite on empty input.
SuiteScore AggregateSuite(Suite suite, std::vector<CaseMetrics> per_case);

// Like AggregateSuite, but sub-test cases are first averaged into their main
// test case (see MainTestCase) and the suite score is the mean over main
// cases. per_case of the result holds one entry per main case, in order of
// first appearance, each carrying the averaged f1.
SuiteScore AggregateSuiteByMainCase(Suite suite,
                                    std::span<const CaseMetrics> sub_cases);

// Mean of exactly five suite scores, one per suite. Throws IncompleteBench on
// a missing or duplicated suite.
BenchScore AggregateBench(std::vector<SuiteScore> suites);

}  // namespace dfbench
