#include <gtest/gtest.h>

#include <sstream>

#include "dfbench/registry.hpp"
#include "expect.hpp"

namespace dfbench {
namespace {

TEST(NormalizeRow, Canonicalizes) {
  const RegistryRow r = NormalizeRow(
      {"  HKLM//Software/Vendor\\\\Key ", "Reg_SZ", " Mixed Value ", "2019-05-01 10:00:00"});
  EXPECT_EQ(r.path, "hklm\\software\\vendor\\key");
  EXPECT_EQ(r.type, "reg_sz");
  EXPECT_EQ(r.value, "Mixed Value");
  EXPECT_EQ(r.mtime, "2019-05-01T10:00:00Z");
  EXPECT_EQ(NormalizeRow({"k", "t", "v", "garbage"}).mtime, "");
}

TEST(RegistryDump, IdentityAndDedup) {
  RegistryDump d;
  d.Add({"HKLM\\A", "REG_SZ", "v", "2019-01-01T00:00:00Z"});
  d.Add({"hklm/a", "reg_sz", "v", "2020-01-01T00:00:00Z"});
  d.Add({"HKLM\\A", "REG_SZ", "V", ""});
  d.Add({"  ", "REG_SZ", "x", ""});
  EXPECT_EQ(d.size(), 2u);

  RegistryDump timed({.compare_mtime = true});
  timed.Add({"HKLM\\A", "REG_SZ", "v", "2019-01-01T00:00:00Z"});
  timed.Add({"hklm/a", "reg_sz", "v", "2020-01-01T00:00:00Z"});
  EXPECT_EQ(timed.size(), 2u);
}

TEST(ReadRegistryRows, HeaderAndErrors) {
  std::istringstream ok("PATH,TYPE,VALUE,MTIME\nHKLM\\A,REG_SZ,\"a,b\",\n");
  const auto rows = ReadRegistryRows(ok);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].value, "a,b");

  std::istringstream bad_header("PATH,TYPE,VALUE\n");
  EXPECT_DFB_ERROR(ReadRegistryRows(bad_header), ErrorKind::kParseError);

  std::istringstream short_row("PATH,TYPE,VALUE,MTIME\nok,REG_SZ,v,\nonly,two\n");
  try {
    ReadRegistryRows(short_row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError);
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_DFB_ERROR(ReadRegistryRowsFile("/nonexistent/dump.csv"),
                   ErrorKind::kGroundTruthUnavailable);
}

TEST(RenderValues, Deterministic) {
  const std::vector<std::uint8_t> data = {0x00, 0xAB, 0x0f};
  EXPECT_EQ(RenderBinaryValue(data), "00ab0f");
  EXPECT_EQ(RenderMultiString({"a", "b", ""}), "a\nb\n");
}

TEST(ScoreRegistry, SetComparison) {
  RegistryDump gt, tool;
  for (const char* k : {"A", "B", "C"}) gt.Add({std::string("HKLM\\") + k, "REG_SZ", "v", ""});
  for (const char* k : {"a", "b", "d"}) tool.Add({std::string("hklm/") + k, "reg_sz", "v", ""});
  const RegistryScore s = ScoreRegistry(tool, gt);
  EXPECT_EQ(s.counts, (MatchCounts{2, 1, 1}));
  EXPECT_EQ(ScoreRegistry(gt, gt).metrics.f1, 1.0);
}

}  // namespace
}  // namespace dfbench
