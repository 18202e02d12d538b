// One line per acceptance criterion: "<n> PASS|FAIL|SKIP <title>: <detail>".
// Exit status is nonzero when any criterion fails.

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "dfbench/batch.hpp"
#include "dfbench/carving.hpp"
#include "dfbench/csv.hpp"
#include "dfbench/dfr.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/fss.hpp"
#include "dfbench/ingest.hpp"
#include "dfbench/registry.hpp"
#include "dfbench/sdr.hpp"
#include "dfbench/text.hpp"
#include "images.hpp"
#include "server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dfbench;

namespace {

struct Outcome {
  std::string status = "PASS";
  std::string detail;
  std::vector<std::string> problems;

  void Expect(bool ok, const std::string& what) {
    if (!ok && problems.size() < 5) problems.push_back(what);
    if (!ok) status = "FAIL";
  }
};

int failures = 0;

void Report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.status = "FAIL";
    o.problems.push_back(std::string("exception: ") + e.what());
  }
  if (o.status == "FAIL") ++failures;
  std::cout << id << " " << o.status << " " << title;
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  for (const auto& p : o.problems) std::cout << " [" << p << "]";
  std::cout << std::endl;
}

struct Fixture {
  fs::path root;
  testing::SyntheticCorpus corpus;
  std::unique_ptr<Store> store;
};

Fixture& Shared() {
  static Fixture f = [] {
    Fixture x;
    x.root = testing::MakeTempDir("dfbench-acceptance");
    x.corpus = testing::BuildSyntheticCorpus(x.root / "corpus");
    x.store = OpenSqliteStore(":memory:");
    testing::IngestCorpus(*x.store, x.corpus);
    return x;
  }();
  return f;
}

std::vector<CsvRecord> ReadCsv(const std::string& text) {
  std::istringstream in(text);
  CsvReader reader(in);
  std::vector<CsvRecord> out;
  CsvRecord r;
  while (reader.Next(r)) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------- 1

Outcome GroundTruthRoundTrip() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  Fixture& f = Shared();
  Evaluator evaluator(*f.store);

  std::set<std::string> scored;
  std::size_t rows = 0;
  for (Suite s : kAllSuites) {
    const fs::path out = f.root / "c1" / (std::string(SuiteName(s)) + ".csv");
    const BatchOutcome b = RunSuiteDir(evaluator, s, f.corpus.BatchDir(s).string(), out.string(),
                                       {.exact_scores = true});
    o.Expect(b.exit_code == 0, std::string(SuiteName(s)) + " batch failed" +
                                   (b.failures.empty() ? "" : ": " + b.failures[0].message));
    const auto report = ReadCsv(ReadFileText(out.string()).value_or(""));
    for (std::size_t i = 1; i < report.size(); ++i) {
      o.Expect(report[i][7] == "1", report[i][0] + " f1=" + report[i][7]);
      if (report[i][0].rfind("AutoDFBench-", 0) != 0) {
        scored.insert(report[i][0]);
        ++rows;
      }
    }
  }

  std::vector<std::string> required;
  for (int i = 1; i <= 10; ++i) required.push_back("FT-SS-" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  for (const char* tc : {"DFR-01", "DFR-01-MAC", "DFR-01-RECYCLE", "DFR-01-SIZE", "DFR-02",
                         "DFR-03", "DFR-04-CHAR", "DFR-05", "DFR-07-SIZE", "DFR-11",
                         "DFR-11-NTFS", "DFR-11-SIZE", "DFR-12", "DFR-14"}) {
    required.push_back(tc);
  }
  // FC-01..03 contiguous, FC-04/05 fragmented, FC-06 non-aligned.
  for (const char* tc : {"carve-conti-bmp", "carve-conti-gif", "carve-conti-png",
                         "carve-conti-heic", "carve-conti-tiff", "carve-frag-bmp",
                         "carve-frag-png", "carve-non-gif", "carve-non-tiff"}) {
    required.push_back(tc);
  }
  for (int i = 2; i <= 4; ++i) required.push_back("CR-0" + std::to_string(i));
  for (int i = 1; i <= 15; ++i) {
    const std::string id = "MR-" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    required.push_back(i == 2 ? id + "-1" : id);
  }
  for (int i = 1; i <= 7; ++i) {
    const std::string id = "NR-0" + std::to_string(i);
    required.push_back(i == 3 ? id + "-1" : id);
  }
  for (const char* tc : {"SFT-01-001", "SFT-02-001", "SFT-03-001", "SFT-04-001"}) {
    required.push_back(tc);
  }
  for (const auto& tc : required) o.Expect(scored.count(tc) == 1, tc + " not scored");

  // The dashed rows have no ground truth and are refused, not scored.
  for (const char* tc : {"DFR-06", "DFR-07", "DFR-08", "DFR-09", "DFR-10", "DFR-13"}) {
    try {
      evaluator.Evaluate(DfrRequest{{tc, "", ""}, {}});
      o.Expect(false, std::string(tc) + " was scored");
    } catch (const Error& e) {
      o.Expect(e.kind() == ErrorKind::kUnknownTestCase, std::string(tc) + " " + e.what());
    }
  }
  for (const char* tc : {"CR-01", "CR-05", "NR-08"}) {
    try {
      evaluator.Evaluate(RegistryRequest{{tc, "", ""}, {}});
      o.Expect(false, std::string(tc) + " was scored");
    } catch (const Error& e) {
      o.Expect(e.kind() == ErrorKind::kUnknownTestCase, std::string(tc) + " " + e.what());
    }
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.Expect(secs < 60.0, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu evaluations over %zu test cases all F1=1, %zu required present, %.2f s",
                rows, scored.size(), required.size(), secs);
  o.detail = buf;
  return o;
}

// ---------------------------------------------------------------- 2

Outcome MetricOracle() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::vector<MatchCounts> cases = {{0, 0, 0}, {0, 5, 0}, {0, 0, 5}, {0, 3, 4}, {1, 0, 0},
                                    {7, 0, 3}, {7, 3, 0}};
  while (cases.size() < 10000) {
    const std::uint64_t scale = rng() % 3 == 0 ? 1000000 : 20;
    cases.push_back({rng() % scale, rng() % scale, rng() % scale});
  }
  double worst = 0.0;
  for (const auto& c : cases) {
    double p, r, f;
    if (c.tp == 0 && c.fp == 0 && c.fn == 0) {
      p = r = f = 1.0;
    } else {
      const long double tp = c.tp, fp = c.fp, fn = c.fn;
      p = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp / (tp + fp));
      r = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp / (tp + fn));
      f = c.tp == 0 ? 0.0 : static_cast<double>(2 * tp / (2 * tp + fp + fn));
    }
    const Metrics m = ComputeMetrics(c);
    const double d = std::max({std::fabs(m.precision - p), std::fabs(m.recall - r),
                               std::fabs(m.f1 - f)});
    worst = std::max(worst, d);
    o.Expect(d <= 1e-12, "tp=" + std::to_string(c.tp) + " fp=" + std::to_string(c.fp) +
                             " fn=" + std::to_string(c.fn));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu count triples, max deviation %.3g", cases.size(), worst);
  o.detail = buf;
  return o;
}

// ---------------------------------------------------------------- 3

// Each generator returns F1 for (base, one true finding removed, one
// spurious finding added).
struct Triple {
  double base, removed, added;
  bool has_removal;
};

std::string FourDigits(std::uint64_t v) {
  char b[8];
  std::snprintf(b, sizeof(b), "%04u", static_cast<unsigned>(v % 10000));
  return b;
}

Triple FssTriple(std::mt19937_64& rng) {
  std::vector<FssGroundTruthHit> gt;
  std::set<std::string> used;
  const std::size_t n = 1 + rng() % 12;
  while (gt.size() < n) {
    const std::string id = FourDigits(1000 + rng() % 4000);
    if (used.insert(id).second) gt.push_back({id, "Line " + id, "FT-SS-01", "linux", std::nullopt});
  }
  FssReport r{"FT-SS-01", "linux", std::nullopt, {}};
  std::vector<std::size_t> true_lines;
  for (const auto& h : gt) {
    if (rng() % 3 != 0) {
      true_lines.push_back(r.reported_lines.size());
      r.reported_lines.push_back("hit " + h.identifier + " here");
    }
  }
  const std::size_t spurious = rng() % 4;
  for (std::size_t i = 0; i < spurious; ++i) {
    if (rng() % 2) {
      r.reported_lines.push_back("bad " + FourDigits(6000 + rng() % 3000));
    } else {
      r.reported_lines.push_back("noise line " + std::string(1 + rng() % 5, 'x'));
    }
  }
  std::shuffle(r.reported_lines.begin(), r.reported_lines.end(), rng);
  Triple t{ScoreStringSearch(r, gt).metrics.f1, 0, 0, false};
  for (std::size_t i = 0; i < r.reported_lines.size(); ++i) {
    const auto id = ExtractIdentifier(r.reported_lines[i]);
    if (id && used.count(*id)) {
      FssReport less = r;
      less.reported_lines.erase(less.reported_lines.begin() + static_cast<long>(i));
      t.removed = ScoreStringSearch(less, gt).metrics.f1;
      t.has_removal = true;
      break;
    }
  }
  FssReport more = r;
  std::string extra;
  do {
    extra = FourDigits(rng() % 10000);
  } while (used.count(extra) || std::any_of(r.reported_lines.begin(), r.reported_lines.end(),
                                            [&](const std::string& l) { return ExtractIdentifier(l) == extra; }));
  more.reported_lines.push_back("spurious " + extra);
  t.added = ScoreStringSearch(more, gt).metrics.f1;
  return t;
}

BlockSet RandomSet(std::mt19937_64& rng, std::uint64_t base) {
  std::vector<BlockRange> parts;
  const int frags = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < frags; ++i) {
    const std::uint64_t s = base + i * 1000 + rng() % 500;
    parts.push_back({s, s + rng() % 40});
  }
  return CanonicalBlocks(parts);
}

Triple DfrTriple(std::mt19937_64& rng) {
  std::vector<GroundTruthRecord> gt;
  const std::size_t n = 1 + rng() % 8;
  for (std::size_t i = 0; i < n; ++i) {
    GroundTruthRecord r;
    r.cftt_task = Suite::kDeletedFileRecovery;
    r.test_case = "DFR-05";
    r.dfr_blocks = RandomSet(rng, i * 10000);
    gt.push_back(r);
  }
  std::vector<BlockSet> rec;
  for (const auto& r : gt) {
    if (rng() % 3 != 0) rec.push_back(*r.dfr_blocks);
  }
  const std::size_t true_count = rec.size();
  const std::size_t spurious = rng() % 3;
  for (std::size_t i = 0; i < spurious; ++i) rec.push_back(RandomSet(rng, 1000000 + i * 10000));
  Triple t{ScoreBlocks("DFR-05", gt, rec).metrics.f1, 0, 0, true_count > 0};
  if (true_count > 0) {
    auto less = rec;
    less.erase(less.begin() + static_cast<long>(rng() % true_count));
    t.removed = ScoreBlocks("DFR-05", gt, less).metrics.f1;
  }
  auto more = rec;
  more.push_back(RandomSet(rng, 5000000));
  t.added = ScoreBlocks("DFR-05", gt, more).metrics.f1;
  return t;
}

Triple CarvingTriple(std::mt19937_64& rng) {
  static const std::vector<std::vector<std::uint8_t>> pool = [] {
    std::vector<std::vector<std::uint8_t>> p;
    for (std::uint64_t s = 0; s < 12; ++s) {
      p.push_back(testing::EncodeBmp(testing::MakePatternImage(24, 24, 500 + s)));
    }
    return p;
  }();
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_gt = 1 + rng() % 5;
  std::vector<GroundTruthImage> gt;
  for (std::size_t i = 0; i < n_gt; ++i) {
    gt.push_back({"g" + std::to_string(i) + ".bmp", pool[order[i]], ImageFormat::kBmp});
  }
  std::vector<CarvedFile> carved;
  for (const auto& g : gt) {
    if (rng() % 3 != 0) carved.push_back({"c" + std::to_string(carved.size()), g.bytes, std::nullopt});
  }
  const std::size_t true_count = carved.size();
  std::size_t next = n_gt;
  const std::size_t spurious = rng() % 3;
  for (std::size_t i = 0; i < spurious; ++i) {
    carved.push_back({"s" + std::to_string(i), pool[order[next++]], std::nullopt});
  }
  Triple t{ScoreCarving(gt, carved).metrics.f1, 0, 0, true_count > 0};
  if (true_count > 0) {
    auto less = carved;
    less.erase(less.begin() + static_cast<long>(rng() % true_count));
    t.removed = ScoreCarving(gt, less).metrics.f1;
  }
  auto more = carved;
  more.push_back({"zz", pool[order[next]], std::nullopt});
  t.added = ScoreCarving(gt, more).metrics.f1;
  return t;
}

Triple RegistryTriple(std::mt19937_64& rng) {
  std::vector<RegistryRow> gt_rows;
  const std::size_t n = 1 + rng() % 20;
  for (std::size_t i = 0; i < n; ++i) {
    gt_rows.push_back({"HKLM\\Soft\\K" + std::to_string(i), "REG_SZ", "v" + std::to_string(rng() % 5), ""});
  }
  RegistryDump gt;
  for (const auto& r : gt_rows) gt.Add(r);
  std::vector<RegistryRow> tool_rows;
  for (const auto& r : gt_rows) {
    if (rng() % 3 != 0) tool_rows.push_back(r);
  }
  const std::size_t true_count = tool_rows.size();
  const std::size_t spurious = rng() % 4;
  for (std::size_t i = 0; i < spurious; ++i) {
    tool_rows.push_back({"HKCU\\X" + std::to_string(i), "REG_DWORD", "1", ""});
  }
  const auto score = [&](const std::vector<RegistryRow>& rows) {
    RegistryDump d;
    for (const auto& r : rows) d.Add(r);
    return ScoreRegistry(d, gt).metrics.f1;
  };
  Triple t{score(tool_rows), 0, 0, true_count > 0};
  if (true_count > 0) {
    auto less = tool_rows;
    less.erase(less.begin() + static_cast<long>(rng() % true_count));
    t.removed = score(less);
  }
  auto more = tool_rows;
  more.push_back({"HKU\\Spurious", "REG_SZ", "s", ""});
  t.added = score(more);
  return t;
}

Triple SqliteTriple(std::mt19937_64& rng) {
  if (rng() % 2 == 0) {
    SqliteSchemaReport gt;
    const std::size_t n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) gt.tables.push_back({"t" + std::to_string(i), {"a", "b"}, rng() % 50});
    SqliteSchemaReport r;
    for (const auto& tb : gt.tables) {
      if (rng() % 3 != 0) r.tables.push_back(tb);
    }
    const std::size_t true_count = r.tables.size();
    if (rng() % 2) r.tables.push_back({"spurious0", {"x"}, 1});
    Triple t{ScoreSft02(gt, r).metrics.f1, 0, 0, true_count > 0};
    if (true_count > 0) {
      auto less = r;
      less.tables.erase(less.tables.begin() + static_cast<long>(rng() % true_count));
      t.removed = ScoreSft02(gt, less).metrics.f1;
    }
    auto more = r;
    more.tables.push_back({"spurious1", {"y"}, 2});
    t.added = ScoreSft02(gt, more).metrics.f1;
    return t;
  }
  SqliteRowRecoveryReport gt{"db.sqlite", {}, {}};
  const std::size_t n = 1 + rng() % 10;
  for (std::size_t i = 0; i < n; ++i) {
    (rng() % 2 ? gt.deleted_row_ids : gt.updated_row_ids).insert(static_cast<std::int64_t>(i));
  }
  SqliteRowRecoveryReport r{"db.sqlite", {}, {}};
  std::vector<std::pair<bool, std::int64_t>> truths;
  for (auto id : gt.deleted_row_ids) {
    if (rng() % 3 != 0) {
      r.deleted_row_ids.insert(id);
      truths.push_back({true, id});
    }
  }
  for (auto id : gt.updated_row_ids) {
    if (rng() % 3 != 0) {
      r.updated_row_ids.insert(id);
      truths.push_back({false, id});
    }
  }
  if (rng() % 2) r.deleted_row_ids.insert(1000);
  Triple t{ScoreSft03(gt, r).metrics.f1, 0, 0, !truths.empty()};
  if (!truths.empty()) {
    auto less = r;
    const auto [deleted, id] = truths[rng() % truths.size()];
    (deleted ? less.deleted_row_ids : less.updated_row_ids).erase(id);
    t.removed = ScoreSft03(gt, less).metrics.f1;
  }
  auto more = r;
  more.updated_row_ids.insert(2000);
  t.added = ScoreSft03(gt, more).metrics.f1;
  return t;
}

Outcome Monotonicity() {
  Outcome o;
  std::mt19937_64 rng(99);
  const std::pair<const char*, std::function<Triple(std::mt19937_64&)>> gens[] = {
      {"FSS", FssTriple}, {"DFR", DfrTriple}, {"FC", CarvingTriple},
      {"WRR", RegistryTriple}, {"SDR", SqliteTriple}};
  std::string detail;
  for (const auto& [name, gen] : gens) {
    int removals = 0;
    for (int i = 0; i < 1000; ++i) {
      const Triple t = gen(rng);
      if (t.has_removal) {
        ++removals;
        o.Expect(t.removed <= t.base, std::string(name) + " removal raised F1");
      }
      o.Expect(t.added <= t.base, std::string(name) + " addition raised F1");
    }
    detail += std::string(detail.empty() ? "" : ", ") + name + " 1000 reports (" +
              std::to_string(removals) + " removals)";
  }
  o.detail = detail;
  return o;
}

// ---------------------------------------------------------------- 4

Outcome ThresholdEdge() {
  Outcome o;
  int fixtures = 0;
  for (const auto& [w, h] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {32, 52}, {40, 60}, {64, 75}, {20, 20}}) {
    const auto gt = testing::EncodeBmp(testing::MakePatternImage(w, h, w * 7 + h));
    const std::size_t chunks = (gt.size() + kSimilarityChunk - 1) / kSimilarityChunk;
    if (chunks % 5 != 0) continue;
    const std::size_t needed = chunks / 5;
    for (std::size_t shared : {needed, needed - 1}) {
      auto carved = gt;
      std::mt19937_64 rng(shared * 31 + chunks);
      for (std::size_t i = shared * kSimilarityChunk; i < carved.size(); ++i) {
        carved[i] = static_cast<std::uint8_t>(rng());
      }
      const GroundTruthImage g{"gt.bmp", gt, ImageFormat::kBmp};
      const CarvedFile c{"carved.bmp", carved, std::nullopt};
      const double sim = ByteSimilarity(carved, gt);
      const CarvingScore s = ScoreCarving(std::span(&g, 1), std::span(&c, 1));
      const std::string tag = std::to_string(shared) + "/" + std::to_string(chunks);
      if (shared == needed) {
        o.Expect(sim == 0.20, tag + " similarity " + std::to_string(sim));
        o.Expect(s.counts == MatchCounts{1, 0, 0}, tag + " not TP");
      } else {
        o.Expect(sim < 0.20, tag + " similarity " + std::to_string(sim));
        o.Expect(s.counts == MatchCounts{0, 1, 1}, tag + " not FN+FP");
      }
      ++fixtures;
    }
  }
  o.Expect(fixtures >= 4, "too few fixtures");
  o.detail = std::to_string(fixtures) + " fixtures at 0.20 and one chunk below";
  return o;
}

// ---------------------------------------------------------------- 5

Outcome BlockOracle() {
  Outcome o;
  std::mt19937_64 rng(4242);
  const std::uint32_t sizes[] = {512, 1024, 2048, 4096};
  for (int i = 0; i < 500; ++i) {
    const DfrGeometry g{rng() % 100000, sizes[rng() % 4], 1u + static_cast<std::uint32_t>(rng() % 64)};
    const std::uint64_t start = g.partition_start_sector + rng() % 10000000;
    const std::uint64_t size = 1 + rng() % (rng() % 2 ? 4096 : 50000000);
    const auto expected = testing::EnumerateFragmentBlocks(start, size, g);
    const BlockRange got = BlocksForFile(start, size, g);
    o.Expect(expected.size() == 1 && expected[0] == got,
             "start=" + std::to_string(start) + " size=" + std::to_string(size));
  }
  o.detail = "500 random (start, size, geometry) triples match sector enumeration";
  return o;
}

// ---------------------------------------------------------------- 6

Outcome SdrConventions() {
  Outcome o;
  std::mt19937_64 rng(6);
  const auto check = [&](const SdrScore& s, const char* what) {
    o.Expect(s.counts.fn == 0, std::string(what) + " fn != 0");
    o.Expect(s.metrics.recall == 0.0 || s.metrics.recall == 1.0, std::string(what) + " recall");
  };
  const TextEncoding encs[] = {TextEncoding::kUtf8, TextEncoding::kUtf16le, TextEncoding::kUtf16be};
  const char* modes[] = {"delete", "wal", "truncate"};
  for (int i = 0; i < 1000; ++i) {
    const auto cfg = [&] {
      return SqliteConfigReport{512u << (rng() % 8), modes[rng() % 3], 1 + rng() % 3,
                                FourDigits(rng() % 3), encs[rng() % 3]};
    };
    check(ScoreSft01(cfg(), cfg()), "SFT-01");

    const auto schema = [&] {
      SqliteSchemaReport s;
      const std::size_t n = rng() % 4;
      for (std::size_t k = 0; k < n; ++k) s.tables.push_back({"t" + std::to_string(rng() % 5), {"a"}, rng() % 2});
      std::sort(s.tables.begin(), s.tables.end(), [](auto& a, auto& b) { return a.name < b.name; });
      s.tables.erase(std::unique(s.tables.begin(), s.tables.end(),
                                 [](auto& a, auto& b) { return a.name == b.name; }),
                     s.tables.end());
      return s;
    };
    check(ScoreSft02(schema(), schema()), "SFT-02");

    const auto source = [&] {
      return SqliteSourceReport{std::string(rng() % 2 ? "A" : "a") + ".db"};
    };
    check(ScoreSft04(source(), source()), "SFT-04");
  }

  // Ground truth rows: 1 deleted, 2 deleted, 3 updated, 4 updated.
  // Report: deleted {1, 5}, updated {3}.
  const SqliteRowRecoveryReport gt{"case.db", {1, 2}, {3, 4}};
  const SqliteRowRecoveryReport report{"case.db", {1, 5}, {3}};
  const SdrScore s = ScoreSft03(gt, report);
  o.Expect(s.counts == MatchCounts{2, 2, 1}, "SFT-03 fixture counts");
  const SdrScore strict = ScoreSft03(gt, report, true);
  o.Expect(strict.counts == MatchCounts{2, 1, 2}, "SFT-03 strict counts");
  o.detail = "3000 randomized SFT-01/02/04 reports with fn=0 and recall in {0,1}; SFT-03 fixture tp=" +
             std::to_string(s.counts.tp) + " fp=" + std::to_string(s.counts.fp) +
             " fn=" + std::to_string(s.counts.fn);
  return o;
}

// ---------------------------------------------------------------- 7

struct Payload {
  std::string test_case;
  std::function<Evaluation(Evaluator&)> in_process;
  std::function<httplib::Result(httplib::Client&)> http;
  std::string batch_csv;
};

std::string Csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) WriteCsvRecord(out, r);
  return out.str();
}

httplib::Result PostJson(httplib::Client& c, const std::string& route, const json& body) {
  return c.Post("/api/v1/" + route + "/evaluate", body.dump(), "application/json");
}

template <typename T>
std::vector<T> Sample(const std::vector<T>& v, std::mt19937_64& rng) {
  std::vector<T> out;
  for (const auto& x : v) {
    if (rng() % 3 != 0) out.push_back(x);
  }
  return out;
}

Payload FssPayload(std::mt19937_64& rng) {
  const int c = 1 + static_cast<int>(rng() % 10);
  const int os_index = static_cast<int>(rng() % 2);
  const std::string os = os_index ? "Linux" : "windows";
  const std::string tc = std::string("FT-SS-") + (c < 10 ? "0" : "") + std::to_string(c);
  std::vector<std::string> lines;
  for (int k = 0; k < 3; ++k) {
    if (rng() % 3 != 0) lines.push_back("Entry " + std::to_string(1000 + c * 20 + os_index * 5 + k) + " found");
  }
  if (rng() % 2) lines.push_back("Entry " + std::to_string(5000 + rng() % 1000) + " bogus");
  if (rng() % 3 == 0) lines.push_back("no identifier here");
  std::shuffle(lines.begin(), lines.end(), rng);
  std::vector<std::vector<std::string>> rows = {{"test_case", "tool", "os", "line"}};
  for (const auto& l : lines) rows.push_back({tc, "eq", os, l});
  if (lines.empty()) rows.push_back({tc, "eq", os, ""});
  return {tc,
          [=](Evaluator& e) { return e.Evaluate(FssRequest{{tc, "eq", ""}, os, std::nullopt, lines}); },
          [=](httplib::Client& cl) {
            return PostJson(cl, "string-search",
                            {{"base_test_case", tc}, {"os", os}, {"tool", "eq"}, {"lines", lines}});
          },
          Csv(rows)};
}

Payload DfrPayload(std::mt19937_64& rng, Store& store) {
  const char* cases[] = {"DFR-01", "DFR-02", "DFR-03", "DFR-05", "DFR-11", "DFR-12",
                         "DFR-14", "DFR-01-SIZE", "DFR-07-SIZE", "DFR-11-SIZE"};
  const std::string tc = cases[rng() % 10];
  const auto gt = store.QueryGroundTruth(MainTestCase(tc), Suite::kDeletedFileRecovery);
  std::vector<DfrRecoveredFile> files;
  const bool by_size = tc.find("SIZE") != std::string::npos;
  for (const auto& r : Sample(gt, rng)) {
    DfrRecoveredFile f;
    if (by_size) {
      f.file_name = r.file_name;
      f.size = *r.size + (rng() % 4 == 0 ? 1 : 0);
    } else {
      BlockSet b = *r.dfr_blocks;
      if (rng() % 4 == 0) b.back().end_block += 1;
      f.blocks = b;
    }
    files.push_back(f);
  }
  if (rng() % 2) {
    DfrRecoveredFile f;
    if (by_size) {
      f.file_name = "ghost.bin";
      f.size = 12;
    } else {
      const std::uint64_t s = 900000 + rng() % 1000;
      f.blocks = std::vector<BlockRange>{{s, s + rng() % 20}};
    }
    files.push_back(f);
  }
  std::vector<std::vector<std::string>> rows = {{"test_case", "tool", "file_name", "size", "blocks"}};
  json jfiles = json::array();
  for (const auto& f : files) {
    rows.push_back({tc, "eq", f.file_name.value_or(""), f.size ? std::to_string(*f.size) : "",
                    f.blocks ? FormatBlockRanges(*f.blocks) : ""});
    json j;
    if (f.file_name) j["file_name"] = *f.file_name;
    if (f.size) j["size"] = *f.size;
    if (f.blocks) j["blocks"] = FormatBlockRanges(*f.blocks);
    jfiles.push_back(j);
  }
  if (files.empty()) rows.push_back({tc, "eq", "", "", ""});
  return {tc, [=](Evaluator& e) { return e.Evaluate(DfrRequest{{tc, "eq", ""}, files}); },
          [=](httplib::Client& cl) {
            return PostJson(cl, "deleted-file-recovery",
                            {{"base_test_case", tc}, {"tool", "eq"}, {"files", jfiles}});
          },
          Csv(rows)};
}

Payload CarvingPayload(std::mt19937_64& rng, Store& store, const fs::path& dir) {
  const auto cases = store.ListTestCases(Suite::kFileCarving);
  const std::string tc = cases[rng() % cases.size()];
  const auto gt = store.QueryGroundTruth(tc, Suite::kFileCarving);
  std::vector<CarvedFile> files;
  for (const auto& r : gt) {
    if (rng() % 3 == 0) continue;
    auto bytes = *ReadFileBytes(r.payload);
    if (rng() % 4 == 0) bytes.resize(bytes.size() / 2);
    files.push_back({"f" + std::to_string(files.size()) + fs::path(r.payload).extension().string(),
                     bytes, std::nullopt});
  }
  if (files.empty() || rng() % 2) {
    files.push_back({"extra.png",
                     testing::EncodePng(testing::MakePatternImage(30, 30, 9000 + rng() % 100)),
                     std::nullopt});
  }
  fs::create_directories(dir);
  std::vector<std::vector<std::string>> rows = {{"test_case", "tool", "path"}};
  httplib::MultipartFormDataItems form = {{"base_test_case", tc, "", ""}, {"tool", "eq", "", ""}};
  for (const auto& f : files) {
    WriteFileAtomic((dir / f.name).string(),
                    std::string_view(reinterpret_cast<const char*>(f.bytes.data()), f.bytes.size()));
    rows.push_back({tc, "eq", (dir / f.name).string()});
    form.push_back({"file", std::string(f.bytes.begin(), f.bytes.end()), f.name,
                    "application/octet-stream"});
  }
  return {tc, [=](Evaluator& e) { return e.Evaluate(CarvingRequest{{tc, "eq", ""}, files}); },
          [=](httplib::Client& cl) { return cl.Post("/api/v1/file-carving/evaluate", form); },
          Csv(rows)};
}

Payload RegistryPayload(std::mt19937_64& rng, Store& store) {
  const auto cases = store.ListTestCases(Suite::kWindowsRegistry);
  const std::string tc = cases[rng() % cases.size()];
  const auto gt = ReadRegistryRowsFile(store.QueryGroundTruth(tc, Suite::kWindowsRegistry)[0].payload);
  std::vector<RegistryRow> rows = Sample(gt, rng);
  for (auto& r : rows) {
    if (rng() % 2) r.path = AsciiLower(r.path);
    if (rng() % 5 == 0) r.value += "!";
  }
  if (rng() % 2) rows.push_back({"HKCU\\Bogus", "REG_SZ", "x", ""});
  std::vector<std::vector<std::string>> dump = {{"PATH", "TYPE", "VALUE", "MTIME"}};
  std::vector<std::vector<std::string>> batch = {{"test_case", "tool", "PATH", "TYPE", "VALUE", "MTIME"}};
  for (const auto& r : rows) {
    dump.push_back({r.path, r.type, r.value, r.mtime});
    batch.push_back({tc, "eq", r.path, r.type, r.value, r.mtime});
  }
  if (rows.empty()) batch.push_back({tc, "eq", "", "", "", ""});
  const std::string dump_text = Csv(dump);
  return {tc, [=](Evaluator& e) { return e.Evaluate(RegistryRequest{{tc, "eq", ""}, rows}); },
          [=](httplib::Client& cl) {
            httplib::MultipartFormDataItems form = {{"base_test_case", tc, "", ""},
                                                    {"tool", "eq", "", ""},
                                                    {"file", dump_text, "dump.csv", "text/csv"}};
            return cl.Post("/api/v1/windows-registry/evaluate", form);
          },
          Csv(batch)};
}

Payload SqlitePayload(std::mt19937_64& rng, Store& store) {
  const auto cases = store.ListTestCases(Suite::kSqlite);
  const std::string tc = cases[rng() % cases.size()];
  SqliteReport report = ParseSqliteGroundTruth(tc, store.QueryGroundTruth(tc, Suite::kSqlite)[0].payload);
  std::visit(
      [&](auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SqliteConfigReport>) {
          if (rng() % 2) r.page_count += 1;
          if (rng() % 3 == 0) r.journal_mode = "memory";
        } else if constexpr (std::is_same_v<T, SqliteSchemaReport>) {
          r.tables = Sample(r.tables, rng);
          if (rng() % 2) r.tables.push_back({"phantom", {"a"}, 1});
        } else if constexpr (std::is_same_v<T, SqliteRowRecoveryReport>) {
          std::set<std::int64_t> kept;
          for (auto id : r.deleted_row_ids) {
            if (rng() % 3) kept.insert(id);
          }
          r.deleted_row_ids = kept;
          if (rng() % 2) r.updated_row_ids.insert(500);
        } else {
          if (rng() % 2) r.source_file = AsciiLower(r.source_file);
        }
      },
      report);
  const std::string text = SqliteReportToJson(report);
  json body = json::parse(text);
  body["base_test_case"] = tc;
  body["tool"] = "eq";
  return {tc, [=](Evaluator& e) { return e.Evaluate(SqliteRequest{{tc, "eq", ""}, report}); },
          [=](httplib::Client& cl) { return PostJson(cl, "sqlite-recovery", body); },
          Csv({{"test_case", "tool", "report"}, {tc, "eq", text}})};
}

bool SameBits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

Outcome Equivalence() {
  Outcome o;
  Fixture& f = Shared();
  Evaluator evaluator(*f.store);
  testing::RunningServer server(evaluator);
  httplib::Client client("127.0.0.1", server.port());
  std::mt19937_64 rng(7007);
  const fs::path dir = f.root / "c7";
  int compared = 0;
  for (Suite s : kAllSuites) {
    for (int i = 0; i < 50; ++i) {
      const fs::path case_dir = dir / SuiteName(s) / std::to_string(i);
      Payload p;
      switch (s) {
        case Suite::kStringSearch: p = FssPayload(rng); break;
        case Suite::kDeletedFileRecovery: p = DfrPayload(rng, *f.store); break;
        case Suite::kFileCarving: p = CarvingPayload(rng, *f.store, case_dir / "files"); break;
        case Suite::kWindowsRegistry: p = RegistryPayload(rng, *f.store); break;
        case Suite::kSqlite: p = SqlitePayload(rng, *f.store); break;
      }
      const std::string tag = std::string(SuiteName(s)) + "#" + std::to_string(i) + " " + p.test_case;
      const Evaluation lib = p.in_process(evaluator);

      const auto res = p.http(client);
      if (!res || res->status != 200) {
        o.Expect(false, tag + " http " + (res ? std::to_string(res->status) + " " + res->body : "no response"));
        continue;
      }
      const json j = json::parse(res->body);

      testing::WriteText(case_dir / "input.csv", p.batch_csv);
      const std::string out = (case_dir / "report.csv").string();
      const BatchOutcome b = RunBatchFile(evaluator, p.test_case, (case_dir / "input.csv").string(),
                                          out, {.exact_scores = true});
      if (b.exit_code != 0) {
        o.Expect(false, tag + " batch " + b.failures[0].message);
        continue;
      }
      const auto rows = ReadCsv(ReadFileText(out).value_or(""));
      if (rows.size() != 3) {
        o.Expect(false, tag + " batch rows " + std::to_string(rows.size()));
        continue;
      }
      const auto& row = rows[1];
      const double bp = std::strtod(row[5].c_str(), nullptr);
      const double br = std::strtod(row[6].c_str(), nullptr);
      const double bf = std::strtod(row[7].c_str(), nullptr);

      const bool counts_agree =
          j["tp"] == lib.counts.tp && j["fp"] == lib.counts.fp && j["fn"] == lib.counts.fn &&
          row[2] == std::to_string(lib.counts.tp) && row[3] == std::to_string(lib.counts.fp) &&
          row[4] == std::to_string(lib.counts.fn);
      const bool bits_agree =
          SameBits(j["precision"].get<double>(), lib.metrics.precision) &&
          SameBits(j["recall"].get<double>(), lib.metrics.recall) &&
          SameBits(j["f1"].get<double>(), lib.metrics.f1) && SameBits(bp, lib.metrics.precision) &&
          SameBits(br, lib.metrics.recall) && SameBits(bf, lib.metrics.f1);
      o.Expect(counts_agree && bits_agree, tag + " disagreement");
      ++compared;
    }
  }
  o.detail = std::to_string(compared) + " payloads agree bit-for-bit across library, HTTP and batch";
  return o;
}

// ---------------------------------------------------------------- 8

Outcome Determinism() {
  Outcome o;
  Fixture& f = Shared();
  int files = 0;
  for (Suite s : kAllSuites) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      // Fresh store and evaluator per run, as separate invocations would have.
      auto store = OpenSqliteStore(":memory:");
      testing::IngestCorpus(*store, f.corpus);
      Evaluator evaluator(*store);
      const fs::path out = f.root / "c8" / std::to_string(run) / (std::string(SuiteName(s)) + ".csv");
      o.Expect(RunSuiteDir(evaluator, s, f.corpus.BatchDir(s).string(), out.string()).exit_code == 0,
               std::string(SuiteName(s)) + " failed");
      std::string all = ReadFileText(out.string()).value_or("");
      for (const auto& tc : f.corpus.batch_cases.at(s)) {
        all += ReadFileText(out.string() + ".cases/" + tc + ".csv").value_or("<missing>");
      }
      if (run == 0) {
        first = all;
      } else {
        o.Expect(all == first, std::string(SuiteName(s)) + " reports differ");
        files += 1 + static_cast<int>(f.corpus.batch_cases.at(s).size());
      }
    }
  }
  o.detail = std::to_string(files) + " report files byte-identical across repeated runs";
  return o;
}

// ---------------------------------------------------------------- 9

Outcome CorpusCounts() {
  Outcome o;
  const char* root = std::getenv("DFBENCH_NIST_ROOT");
  if (!root || !*root) {
    o.status = "SKIP";
    o.detail = "DFBENCH_NIST_ROOT not set; expects <root>/<suite>/manifest.csv";
    return o;
  }
  const std::map<Suite, std::size_t> expected = {{Suite::kStringSearch, 1844},
                                                 {Suite::kDeletedFileRecovery, 8147},
                                                 {Suite::kFileCarving, 108},
                                                 {Suite::kWindowsRegistry, 49},
                                                 {Suite::kSqlite, 820}};
  auto store = OpenSqliteStore(":memory:");
  DfrGeometry geometry;
  if (const char* ps = std::getenv("DFBENCH_NIST_PARTITION_START")) {
    geometry.partition_start_sector = std::strtoull(ps, nullptr, 10);
  }
  std::size_t total = 0;
  std::string detail;
  for (const auto& [suite, want] : expected) {
    const fs::path manifest = fs::path(root) / SuiteName(suite) / "manifest.csv";
    const std::size_t got = Ingest(*store, suite, manifest.string(), {geometry});
    o.Expect(got == want, std::string(SuiteName(suite)) + " " + std::to_string(got) + " != " +
                              std::to_string(want));
    total += got;
    detail += std::string(detail.empty() ? "" : " / ") + std::to_string(got);
  }
  o.Expect(total == 10968, "total " + std::to_string(total));
  o.detail = detail + ", total " + std::to_string(total);
  return o;
}

}  // namespace

int main() {
  Report(1, "ground-truth round-trip", GroundTruthRoundTrip);
  Report(2, "metric oracle", MetricOracle);
  Report(3, "perturbation monotonicity", Monotonicity);
  Report(4, "carving threshold edge", ThresholdEdge);
  Report(5, "block oracle", BlockOracle);
  Report(6, "SDR conventions", SdrConventions);
  Report(7, "API/library/CLI equivalence", Equivalence);
  Report(8, "batch determinism", Determinism);
  Report(9, "corpus-count check", CorpusCounts);
  fs::remove_all(Shared().root);
  return failures == 0 ? 0 : 1;
}
