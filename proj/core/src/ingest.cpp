#include "dfbench/ingest.hpp"

#include <filesystem>
#include <fstream>

#include "dfbench/csv.hpp"
#include "dfbench/error.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/fss.hpp"
#include "dfbench/image.hpp"
#include "dfbench/registry.hpp"
#include "dfbench/sdr.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

namespace fs = std::filesystem;

namespace {

class RowContext {
 public:
  RowContext(const CsvTable& table, const CsvRecord& row, const fs::path& base)
      : table_(table), row_(row), base_(base) {}

  std::string Get(std::string_view column) const {
    return std::string(Trim(CsvTable::Field(row_, table_.Column(column))));
  }
  std::string Require(std::string_view column) const {
    std::string v = Get(column);
    if (v.empty()) Bad("missing value for '" + std::string(column) + "'");
    return v;
  }
  std::optional<std::uint64_t> Uint(std::string_view column) const {
    const std::string v = Get(column);
    if (v.empty()) return std::nullopt;
    auto n = ParseUint(v);
    if (!n) Bad("'" + std::string(column) + "' is not a non-negative integer");
    return n;
  }
  std::optional<Timestamp> Time(std::string_view column) const {
    const std::string v = Get(column);
    if (v.empty()) return std::nullopt;
    auto t = ParseTimestamp(v);
    if (!t) Bad("'" + std::string(column) + "' is not a timestamp");
    return t;
  }
  std::string Path(std::string_view column) const {
    const fs::path p(Require(column));
    return (p.is_absolute() ? p : base_ / p).lexically_normal().string();
  }
  [[noreturn]] void Bad(const std::string& msg) const { FailParse(table_.line(), msg); }

 private:
  const CsvTable& table_;
  const CsvRecord& row_;
  const fs::path& base_;
};

std::string SuiteCheckedTestCase(const RowContext& row, Suite suite) {
  std::string tc = row.Require("test_case");
  if (SuiteForTestCase(tc) != suite) {
    row.Bad("'" + tc + "' is not a " + std::string(SuiteName(suite)) + " test case");
  }
  return tc;
}

std::optional<FileStatus> Status(const RowContext& row) {
  const std::string v = row.Get("type");
  if (v.empty()) return std::nullopt;
  auto s = ParseFileStatus(v);
  if (!s) row.Bad("unknown file status '" + v + "'");
  return s;
}

GroundTruthRecord FssRow(const RowContext& row) {
  GroundTruthRecord r;
  r.cftt_task = Suite::kStringSearch;
  r.test_case = SuiteCheckedTestCase(row, Suite::kStringSearch);
  r.os = row.Require("os");
  r.type = Status(row);
  const std::string id = row.Require("identifier");
  if (id.size() != 4 || id.find_first_not_of("0123456789") != std::string::npos) {
    row.Bad("identifier must be four digits");
  }
  r.payload = FormatFssPayload({id, row.Get("line_text")});
  return r;
}

GroundTruthRecord DfrRow(const RowContext& row, const DfrGeometry& defaults) {
  GroundTruthRecord r;
  r.cftt_task = Suite::kDeletedFileRecovery;
  r.test_case = SuiteCheckedTestCase(row, Suite::kDeletedFileRecovery);
  const std::string name = row.Get("file_name");
  if (!name.empty()) r.file_name = NormalizeNfc(name);
  r.size = row.Uint("size");
  r.access_time_stamp = row.Time("access_time");
  r.modify_time_stamp = row.Time("modify_time");
  r.change_time_stamp = row.Time("change_time");
  r.deleted_time_stamp = row.Time("deleted_time");
  r.type = Status(row);

  DfrGeometry g = defaults;
  if (auto v = row.Uint("partition_start_sector")) g.partition_start_sector = *v;
  if (auto v = row.Uint("sector_size")) g.sector_size = static_cast<std::uint32_t>(*v);
  if (auto v = row.Uint("sectors_per_block")) {
    g.sectors_per_block = static_cast<std::uint32_t>(*v);
  }

  std::vector<BlockRange> blocks;
  if (const std::string explicit_blocks = row.Get("dfr_blocks"); !explicit_blocks.empty()) {
    try {
      blocks = ParseBlockRanges(explicit_blocks);
    } catch (const Error& e) {
      row.Bad(e.what());
    }
  }
  if (const std::string start = row.Get("start_sector"); !start.empty()) {
    for (const auto& part : Split(start, ';')) {
      const auto colon = part.find(':');
      const auto sector = ParseUint(part.substr(0, colon));
      std::optional<std::uint64_t> bytes = r.size;
      if (colon != std::string::npos) bytes = ParseUint(part.substr(colon + 1));
      if (!sector || !bytes) row.Bad("malformed start_sector '" + start + "'");
      blocks.push_back(BlocksForFile(*sector, *bytes, g));
    }
  }
  if (!blocks.empty()) r.dfr_blocks = CanonicalBlocks(std::move(blocks));
  return r;
}

std::string_view CarveLabel(CarveType t) {
  return t == CarveType::kContig ? "conti" : CarveTypeName(t);
}

GroundTruthRecord CarvingRow(const RowContext& row) {
  GroundTruthRecord r;
  r.cftt_task = Suite::kFileCarving;
  const std::string format_text = row.Require("format");
  const auto format = ParseImageFormat(format_text);
  if (!format) row.Bad("unknown image format '" + format_text + "'");
  const std::string carve_text = row.Require("carve_type");
  r.carve_type = ParseCarveType(carve_text);
  if (!r.carve_type) row.Bad("unknown carve_type '" + carve_text + "'");
  if (row.Get("test_case").empty()) {
    r.test_case = "carve-" + std::string(CarveLabel(*r.carve_type)) + "-" +
                  std::string(ImageFormatName(*format));
  } else {
    r.test_case = SuiteCheckedTestCase(row, Suite::kFileCarving);
  }
  r.payload = row.Path("path");
  if (!ReadFileBytes(r.payload)) {
    Fail(ErrorKind::kGroundTruthUnavailable, "cannot read image '" + r.payload + "'");
  }
  return r;
}

GroundTruthRecord RegistryRowRecord(const RowContext& row) {
  GroundTruthRecord r;
  r.cftt_task = Suite::kWindowsRegistry;
  r.test_case = SuiteCheckedTestCase(row, Suite::kWindowsRegistry);
  r.payload = row.Path("dump_path");
  ReadRegistryRowsFile(r.payload);
  return r;
}

SqliteSchemaReport ReadSchemaSidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kGroundTruthUnavailable, "cannot read sidecar '" + path + "'");
  CsvTable table(in);
  const auto name_col = table.RequireColumn("table");
  const auto cols_col = table.RequireColumn("columns");
  const auto count_col = table.RequireColumn("row_count");
  SqliteSchemaReport report;
  CsvRecord rec;
  while (table.Next(rec)) {
    SqliteTable t;
    t.name = std::string(Trim(CsvTable::Field(rec, name_col)));
    for (const auto& c : Split(CsvTable::Field(rec, cols_col), ';')) {
      t.columns.emplace_back(Trim(c));
    }
    auto count = ParseUint(CsvTable::Field(rec, count_col));
    if (t.name.empty() || !count) FailParse(table.line(), "malformed schema sidecar row");
    t.row_count = *count;
    report.tables.push_back(std::move(t));
  }
  return report;
}

SqliteRowRecoveryReport ReadRowSidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kGroundTruthUnavailable, "cannot read sidecar '" + path + "'");
  CsvTable table(in);
  const auto id_col = table.RequireColumn("row_id");
  const auto state_col = table.RequireColumn("state");
  SqliteRowRecoveryReport report;
  CsvRecord rec;
  while (table.Next(rec)) {
    auto id = ParseInt(CsvTable::Field(rec, id_col));
    const std::string state = AsciiLower(Trim(CsvTable::Field(rec, state_col)));
    if (!id) FailParse(table.line(), "row_id is not an integer");
    if (state == "deleted") {
      report.deleted_row_ids.insert(*id);
    } else if (state == "updated") {
      report.updated_row_ids.insert(*id);
    } else {
      FailParse(table.line(), "state must be deleted or updated");
    }
  }
  return report;
}

GroundTruthRecord SqliteRow(const RowContext& row) {
  GroundTruthRecord r;
  r.cftt_task = Suite::kSqlite;
  r.test_case = SuiteCheckedTestCase(row, Suite::kSqlite);
  SqliteReport report;
  switch (SftKindForTestCase(r.test_case)) {
    case SftKind::kConfig: {
      const std::string db = row.Path("database_path");
      auto bytes = ReadFileBytes(db);
      if (!bytes) Fail(ErrorKind::kGroundTruthUnavailable, "cannot read database '" + db + "'");
      const SqliteHeader h = ReadSqliteHeader(*bytes);
      std::error_code ec;
      const bool wal = fs::exists(db + "-wal", ec);
      report = SqliteConfigReport{h.page_size, JournalModeHint(h, wal), h.page_count,
                                  Sha256Hex(*bytes), h.text_encoding};
      break;
    }
    case SftKind::kSchema:
      report = ReadSchemaSidecar(row.Path("sidecar_path"));
      break;
    case SftKind::kRowRecovery: {
      SqliteRowRecoveryReport rows = ReadRowSidecar(row.Path("sidecar_path"));
      rows.database_name = BaseName(row.Require("database_path"));
      report = std::move(rows);
      break;
    }
    case SftKind::kSource:
      report = SqliteSourceReport{BaseName(row.Require("database_path"))};
      break;
  }
  r.payload = SqliteReportToJson(report);
  return r;
}

}  // namespace

std::vector<GroundTruthRecord> ReadManifest(Suite suite, const std::string& manifest_path,
                                            const IngestOptions& options) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) {
    Fail(ErrorKind::kInvalidArgument, "cannot read manifest '" + manifest_path + "'");
  }
  const fs::path base = fs::absolute(fs::path(manifest_path)).parent_path();
  CsvTable table(in);
  table.RequireColumn("test_case");
  std::vector<GroundTruthRecord> records;
  CsvRecord rec;
  while (table.Next(rec)) {
    const RowContext row(table, rec, base);
    try {
      switch (suite) {
        case Suite::kStringSearch: records.push_back(FssRow(row)); break;
        case Suite::kDeletedFileRecovery:
          records.push_back(DfrRow(row, options.geometry));
          break;
        case Suite::kFileCarving: records.push_back(CarvingRow(row)); break;
        case Suite::kWindowsRegistry: records.push_back(RegistryRowRecord(row)); break;
        case Suite::kSqlite: records.push_back(SqliteRow(row)); break;
      }
      ValidateGroundTruth(records.back());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kParseError && e.line() == table.line()) throw;
      throw Error(e.kind(), "line " + std::to_string(table.line()) + ": " + e.what(),
                  table.line());
    }
  }
  return records;
}

std::size_t Ingest(Store& store, Suite suite, const std::string& manifest_path,
                   const IngestOptions& options) {
  const auto records = ReadManifest(suite, manifest_path, options);
  const auto ids = store.InsertGroundTruthBatch(records);
  store.SetConfig({"source_dir", fs::absolute(fs::path(manifest_path)).parent_path().string(),
                   std::string(SuiteName(suite))});
  return ids.size();
}

std::vector<GroundTruthRecord> ReadGroundTruthCsv(std::istream& in) {
  CsvTable table(in);
  table.RequireColumn("test_case");
  const fs::path base;
  std::vector<GroundTruthRecord> records;
  CsvRecord rec;
  while (table.Next(rec)) {
    const RowContext row(table, rec, base);
    GroundTruthRecord r;
    r.test_case = row.Require("test_case");
    if (const std::string task = row.Get("cftt_task"); !task.empty()) {
      auto s = ParseSuite(task);
      if (!s) row.Bad("unknown cftt_task '" + task + "'");
      r.cftt_task = *s;
    } else if (auto s = SuiteForTestCase(r.test_case)) {
      r.cftt_task = *s;
    } else {
      row.Bad("cannot infer cftt_task for '" + r.test_case + "'");
    }
    r.type = Status(row);
    if (auto v = row.Get("os"); !v.empty()) r.os = v;
    if (auto v = row.Get("file_name"); !v.empty()) r.file_name = NormalizeNfc(v);
    r.size = row.Uint("size");
    r.access_time_stamp = row.Time("access_time_stamp");
    r.modify_time_stamp = row.Time("modify_time_stamp");
    r.change_time_stamp = row.Time("change_time_stamp");
    r.deleted_time_stamp = row.Time("deleted_time_stamp");
    if (auto v = row.Get("dfr_blocks"); !v.empty()) {
      try {
        r.dfr_blocks = CanonicalBlocks(ParseBlockRanges(v));
      } catch (const Error& e) {
        row.Bad(e.what());
      }
    }
    if (auto v = row.Get("carve_type"); !v.empty()) {
      r.carve_type = ParseCarveType(v);
      if (!r.carve_type) row.Bad("unknown carve_type '" + v + "'");
    }
    r.payload = std::string(CsvTable::Field(rec, table.Column("payload")));
    try {
      ValidateGroundTruth(r);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(table.line()) + ": " + e.what(),
                  table.line());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::size_t ImportGroundTruthCsv(Store& store, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kInvalidArgument, "cannot read '" + path + "'");
  const auto records = ReadGroundTruthCsv(in);
  return store.InsertGroundTruthBatch(records).size();
}

}  // namespace dfbench
