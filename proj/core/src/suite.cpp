#include "dfbench/suite.hpp"

#include <regex>

#include "dfbench/text.hpp"

namespace dfbench {

std::string_view SuiteName(Suite suite) {
  switch (suite) {
    case Suite::kStringSearch: return "string_search";
    case Suite::kDeletedFileRecovery: return "deleted_file_recovery";
    case Suite::kFileCarving: return "file_carving";
    case Suite::kWindowsRegistry: return "windows_registry";
    case Suite::kSqlite: return "sqlite";
  }
  return "";
}

std::string_view SuiteAbbreviation(Suite suite) {
  switch (suite) {
    case Suite::kStringSearch: return "FSS";
    case Suite::kDeletedFileRecovery: return "DFR";
    case Suite::kFileCarving: return "FC";
    case Suite::kWindowsRegistry: return "WRR";
    case Suite::kSqlite: return "SDR";
  }
  return "";
}

std::optional<Suite> ParseSuite(std::string_view text) {
  const std::string t = AsciiLower(Trim(text));
  if (t == "string_search" || t == "fss" || t == "string-search") {
    return Suite::kStringSearch;
  }
  if (t == "deleted_file_recovery" || t == "dfr" ||
      t == "deleted-file-recovery") {
    return Suite::kDeletedFileRecovery;
  }
  if (t == "file_carving" || t == "fc" || t == "carving" ||
      t == "file-carving") {
    return Suite::kFileCarving;
  }
  if (t == "windows_registry" || t == "wrr" || t == "registry" ||
      t == "windows-registry") {
    return Suite::kWindowsRegistry;
  }
  if (t == "sqlite" || t == "sdr" || t == "sqlite-recovery" ||
      t == "sqlite_recovery") {
    return Suite::kSqlite;
  }
  return std::nullopt;
}

namespace {

const std::regex& FssPattern() {
  static const std::regex re(R"(^(FT-SS-\d+)(-.*)?$)", std::regex::icase);
  return re;
}
const std::regex& DfrPattern() {
  static const std::regex re(R"(^(DFR-\d+)(-.*)?$)", std::regex::icase);
  return re;
}
const std::regex& CarvePattern() {
  static const std::regex re(R"(^(carve-[A-Za-z]+-[A-Za-z0-9]+)(-.*)?$)",
                             std::regex::icase);
  return re;
}
const std::regex& RegistryPattern() {
  static const std::regex re(R"(^((?:NR|CR|MR)-\d+)(-.*)?$)",
                             std::regex::icase);
  return re;
}
const std::regex& SqlitePattern() {
  static const std::regex re(R"(^(SFT-\d+)(-.*)?$)", std::regex::icase);
  return re;
}

}  // namespace

std::optional<Suite> SuiteForTestCase(std::string_view test_case) {
  const std::string id(Trim(test_case));
  if (std::regex_match(id, FssPattern())) return Suite::kStringSearch;
  if (std::regex_match(id, DfrPattern())) return Suite::kDeletedFileRecovery;
  if (std::regex_match(id, CarvePattern())) return Suite::kFileCarving;
  if (std::regex_match(id, RegistryPattern())) return Suite::kWindowsRegistry;
  if (std::regex_match(id, SqlitePattern())) return Suite::kSqlite;
  return std::nullopt;
}

std::string MainTestCase(std::string_view test_case) {
  const std::string id(Trim(test_case));
  std::smatch m;
  for (const std::regex* re : {&FssPattern(), &DfrPattern(), &CarvePattern(),
                               &RegistryPattern(), &SqlitePattern()}) {
    if (std::regex_match(id, m, *re)) return m[1].str();
  }
  return id;
}

}  // namespace dfbench
