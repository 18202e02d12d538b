#include "dfbench/metrics.hpp"

#include <algorithm>
#include <map>

#include "dfbench/error.hpp"

namespace dfbench {

Metrics ComputeMetrics(const MatchCounts& c) {
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0};

  Metrics m;
  const double tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) m.precision = tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = tp / static_cast<double>(c.tp + c.fn);
  const double sum = m.precision + m.recall;
  m.f1 = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
  return m;
}

namespace {

double MeanF1(const std::vector<CaseMetrics>& cases) {
  double total = 0.0;
  for (const auto& c : cases) total += c.metrics.f1;
  return total / static_cast<double>(cases.size());
}

}  // namespace

SuiteScore AggregateSuite(Suite suite, std::vector<CaseMetrics> per_case) {
  if (per_case.empty()) {
    Fail(ErrorKind::kEmptySuite, "no test cases were evaluated for suite " +
                                     std::string(SuiteName(suite)));
  }
  SuiteScore out;
  out.suite = suite;
  out.score = MeanF1(per_case);
  out.per_case = std::move(per_case);
  return out;
}

SuiteScore AggregateSuiteByMainCase(Suite suite,
                                    std::span<const CaseMetrics> sub_cases) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& c : sub_cases) {
    const std::string main = MainTestCase(c.test_case);
    auto [it, inserted] = sums.try_emplace(main, 0.0, 0);
    if (inserted) order.push_back(main);
    it->second.first += c.metrics.f1;
    it->second.second += 1;
  }
  std::vector<CaseMetrics> mains;
  mains.reserve(order.size());
  for (const auto& id : order) {
    const auto& [sum, n] = sums.at(id);
    CaseMetrics cm;
    cm.test_case = id;
    cm.metrics.f1 = sum / static_cast<double>(n);
    mains.push_back(std::move(cm));
  }
  return AggregateSuite(suite, std::move(mains));
}

BenchScore AggregateBench(std::vector<SuiteScore> suites) {
  if (suites.size() != kAllSuites.size()) {
    Fail(ErrorKind::kIncompleteBench,
         "expected 5 suite scores, got " + std::to_string(suites.size()));
  }
  for (Suite s : kAllSuites) {
    const auto n = std::count_if(suites.begin(), suites.end(),
                                 [s](const SuiteScore& x) { return x.suite == s; });
    if (n != 1) {
      Fail(ErrorKind::kIncompleteBench,
           std::string(n == 0 ? "missing" : "duplicated") + " suite " +
               std::string(SuiteName(s)));
    }
  }
  // Sum in canonical suite order so the result does not depend on the order
  // the caller supplied.
  double total = 0.0;
  for (Suite s : kAllSuites) {
    total += std::find_if(suites.begin(), suites.end(),
                          [s](const SuiteScore& x) { return x.suite == s; })
                 ->score;
  }
  BenchScore out;
  out.score = total / static_cast<double>(suites.size());
  out.suite_scores = std::move(suites);
  return out;
}

}  // namespace dfbench
