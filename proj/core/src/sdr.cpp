#include "dfbench/sdr.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <regex>
#include <unordered_set>

#include <json.hpp>

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

using nlohmann::json;

std::string_view TextEncodingName(TextEncoding e) {
  switch (e) {
    case TextEncoding::kUtf8: return "utf8";
    case TextEncoding::kUtf16le: return "utf16le";
    case TextEncoding::kUtf16be: return "utf16be";
  }
  return "";
}

std::optional<TextEncoding> ParseTextEncoding(std::string_view text) {
  std::string t = AsciiLower(Trim(text));
  std::erase(t, '-');
  if (t == "utf8") return TextEncoding::kUtf8;
  if (t == "utf16le") return TextEncoding::kUtf16le;
  if (t == "utf16be") return TextEncoding::kUtf16be;
  return std::nullopt;
}

SftKind SftKindForTestCase(std::string_view test_case) {
  static const std::regex re(R"(^SFT-0*([1-4])(-.*)?$)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(test_case.begin(), test_case.end(), m, re)) {
    Fail(ErrorKind::kUnknownTestCase,
         "unknown SQLite test case '" + std::string(test_case) + "'");
  }
  return static_cast<SftKind>(m[1].str()[0] - '0');
}

namespace {

[[noreturn]] void Shape(const std::string& msg) { Fail(ErrorKind::kShapeMismatch, msg); }

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) Shape(std::string("missing field '") + key + "'");
  return *it;
}

std::string RequireString(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_string()) Shape(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t RequireUint(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_number_unsigned()) {
    Shape(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::set<std::int64_t> RequireIdSet(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_array()) Shape(std::string("field '") + key + "' must be an array");
  std::set<std::int64_t> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) {
      Shape(std::string("field '") + key + "' must contain integers");
    }
    out.insert(e.get<std::int64_t>());
  }
  return out;
}

bool IsPowerOfTwo(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

SqliteConfigReport ParseConfig(const json& j) {
  SqliteConfigReport r;
  const std::uint64_t page_size = RequireUint(j, "page_size");
  if (!IsPowerOfTwo(page_size) || page_size < 512 || page_size > 65536) {
    Shape("page_size must be a power of two in [512, 65536]");
  }
  r.page_size = static_cast<std::uint32_t>(page_size);
  r.journal_mode = AsciiLower(Trim(RequireString(j, "journal_mode")));
  r.page_count = RequireUint(j, "page_count");
  if (r.page_count == 0) Shape("page_count must be positive");
  r.file_hash = AsciiLower(Trim(RequireString(j, "file_hash")));
  auto enc = ParseTextEncoding(RequireString(j, "text_encoding"));
  if (!enc) Shape("text_encoding must be utf8, utf16le or utf16be");
  r.text_encoding = *enc;
  return r;
}

SqliteSchemaReport ParseSchema(const json& j) {
  const json& tables = Require(j, "tables");
  if (!tables.is_array()) Shape("field 'tables' must be an array");
  SqliteSchemaReport r;
  std::unordered_set<std::string> seen;
  for (const json& t : tables) {
    if (!t.is_object()) Shape("each table must be an object");
    SqliteTable table;
    table.name = RequireString(t, "name");
    const json& cols = Require(t, "columns");
    if (!cols.is_array()) Shape("field 'columns' must be an array");
    for (const json& c : cols) {
      if (!c.is_string()) Shape("column names must be strings");
      table.columns.push_back(c.get<std::string>());
    }
    table.row_count = RequireUint(t, "row_count");
    if (!seen.insert(table.name).second) Shape("duplicate table '" + table.name + "'");
    r.tables.push_back(std::move(table));
  }
  return r;
}

SqliteRowRecoveryReport ParseRows(const json& j) {
  SqliteRowRecoveryReport r;
  r.database_name = RequireString(j, "database_name");
  r.deleted_row_ids = RequireIdSet(j, "deleted_row_ids");
  r.updated_row_ids = RequireIdSet(j, "updated_row_ids");
  for (std::int64_t id : r.deleted_row_ids) {
    if (r.updated_row_ids.count(id)) {
      Shape("row id " + std::to_string(id) + " is both deleted and updated");
    }
  }
  return r;
}

SqliteSourceReport ParseSource(const json& j) {
  SqliteSourceReport r;
  r.source_file = RequireString(j, "source_file");
  if (Trim(r.source_file).empty()) Shape("source_file is empty");
  return r;
}

SdrScore Finish(MatchCounts counts) { return {counts, ComputeMetrics(counts)}; }

std::uint32_t Be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

}  // namespace

SqliteReport ParseSqliteReport(std::string_view test_case, std::string_view text) {
  const SftKind kind = SftKindForTestCase(test_case);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) Shape("report must be a JSON object");
  switch (kind) {
    case SftKind::kConfig: return ParseConfig(j);
    case SftKind::kSchema: return ParseSchema(j);
    case SftKind::kRowRecovery: return ParseRows(j);
    case SftKind::kSource: return ParseSource(j);
  }
  Shape("unreachable");
}

std::string SqliteReportToJson(const SqliteReport& report) {
  json j = std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SqliteConfigReport>) {
          return {{"page_size", r.page_size},
                  {"journal_mode", r.journal_mode},
                  {"page_count", r.page_count},
                  {"file_hash", r.file_hash},
                  {"text_encoding", TextEncodingName(r.text_encoding)}};
        } else if constexpr (std::is_same_v<T, SqliteSchemaReport>) {
          json tables = json::array();
          for (const auto& t : r.tables) {
            tables.push_back({{"name", t.name}, {"columns", t.columns},
                              {"row_count", t.row_count}});
          }
          return {{"tables", tables}};
        } else if constexpr (std::is_same_v<T, SqliteRowRecoveryReport>) {
          return {{"database_name", r.database_name},
                  {"deleted_row_ids", r.deleted_row_ids},
                  {"updated_row_ids", r.updated_row_ids}};
        } else {
          return {{"source_file", r.source_file}};
        }
      },
      report);
  return j.dump();
}

SdrScore ScoreSft01(const SqliteConfigReport& gt, const SqliteConfigReport& r) {
  MatchCounts c;
  for (bool match : {gt.page_size == r.page_size, gt.journal_mode == r.journal_mode,
                     gt.page_count == r.page_count, gt.file_hash == r.file_hash,
                     gt.text_encoding == r.text_encoding}) {
    ++(match ? c.tp : c.fp);
  }
  return Finish(c);
}

SdrScore ScoreSft02(const SqliteSchemaReport& gt, const SqliteSchemaReport& r) {
  std::map<std::string, const SqliteTable*> expected;
  for (const auto& t : gt.tables) expected.emplace(t.name, &t);
  MatchCounts c;
  for (const auto& t : r.tables) {
    auto it = expected.find(t.name);
    ++(it != expected.end() && *it->second == t ? c.tp : c.fp);
  }
  return Finish(c);
}

SdrScore ScoreSft03(const SqliteRowRecoveryReport& gt,
                    const SqliteRowRecoveryReport& r, bool strict) {
  std::uint64_t tp = 0, missing = 0, spurious = 0;
  const auto compare = [&](const std::set<std::int64_t>& truth,
                           const std::set<std::int64_t>& reported) {
    for (std::int64_t id : reported) ++(truth.count(id) ? tp : spurious);
    for (std::int64_t id : truth) missing += reported.count(id) == 0;
  };
  if (gt.database_name == r.database_name) {
    compare(gt.deleted_row_ids, r.deleted_row_ids);
    compare(gt.updated_row_ids, r.updated_row_ids);
  } else {
    spurious = r.deleted_row_ids.size() + r.updated_row_ids.size();
    missing = gt.deleted_row_ids.size() + gt.updated_row_ids.size();
  }
  MatchCounts c;
  c.tp = tp;
  c.fp = strict ? spurious : missing;
  c.fn = strict ? missing : spurious;
  return Finish(c);
}

SdrScore ScoreSft04(const SqliteSourceReport& gt, const SqliteSourceReport& r) {
  MatchCounts c;
  ++(BaseName(gt.source_file) == BaseName(r.source_file) ? c.tp : c.fp);
  return Finish(c);
}

SdrScore ScoreSqlite(const SqliteReport& gt, const SqliteReport& r, bool strict_sft03) {
  if (gt.index() != r.index()) Shape("report shape does not match the ground truth");
  switch (gt.index()) {
    case 0: return ScoreSft01(std::get<0>(gt), std::get<0>(r));
    case 1: return ScoreSft02(std::get<1>(gt), std::get<1>(r));
    case 2: return ScoreSft03(std::get<2>(gt), std::get<2>(r), strict_sft03);
    default: return ScoreSft04(std::get<3>(gt), std::get<3>(r));
  }
}

SqliteHeader ReadSqliteHeader(std::span<const std::uint8_t> bytes) {
  static constexpr char kMagic[] = "SQLite format 3";  // 16 bytes with the NUL
  if (bytes.size() < 16) {
    if (bytes.empty() || !std::equal(bytes.begin(), bytes.end(), kMagic)) {
      Fail(ErrorKind::kNotSqlite, "missing SQLite magic");
    }
    Fail(ErrorKind::kTruncated, "header shorter than 100 bytes");
  }
  if (!std::equal(bytes.begin(), bytes.begin() + 16, kMagic)) {
    Fail(ErrorKind::kNotSqlite, "missing SQLite magic");
  }
  if (bytes.size() < 100) Fail(ErrorKind::kTruncated, "header shorter than 100 bytes");

  SqliteHeader h;
  const std::uint32_t raw_page = (std::uint32_t{bytes[16]} << 8) | bytes[17];
  h.page_size = raw_page == 1 ? 65536 : raw_page;
  if (!IsPowerOfTwo(h.page_size) || h.page_size < 512) {
    Fail(ErrorKind::kNotSqlite, "invalid page size " + std::to_string(raw_page));
  }
  h.write_version = bytes[18];
  h.read_version = bytes[19];
  h.page_count = Be32(bytes, 28);
  switch (Be32(bytes, 56)) {
    case 1: h.text_encoding = TextEncoding::kUtf8; break;
    case 2: h.text_encoding = TextEncoding::kUtf16le; break;
    case 3: h.text_encoding = TextEncoding::kUtf16be; break;
    default: Fail(ErrorKind::kNotSqlite, "invalid text encoding code");
  }
  return h;
}

std::string JournalModeHint(const SqliteHeader& header, bool has_wal_companion) {
  return header.write_version == 2 || has_wal_companion ? "wal" : "delete";
}

std::string Sha256Hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    Fail(ErrorKind::kStorage, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace dfbench
