#include "dfbench/config.hpp"

#include <cstdlib>
#include <sstream>

#include "dfbench/error.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

namespace {

// Value text up to an unquoted '#', with surrounding quotes removed.
std::string ParseValue(std::string_view v, std::size_t line) {
  if (v.empty() || v.front() != '"') {
    return std::string(Trim(v.substr(0, v.find('#'))));
  }
  const auto close = v.find('"', 1);
  if (close == std::string_view::npos) FailParse(line, "unterminated string");
  const std::string_view after = Trim(v.substr(close + 1));
  if (!after.empty() && after.front() != '#') FailParse(line, "text after closing quote");
  return std::string(v.substr(1, close - 1));
}

bool KnownSection(std::string_view s) {
  return s == "store" || s == "server" || s == "dfr" || s == "scoring";
}

bool ParseBool(std::string_view v, std::size_t line) {
  if (v == "true") return true;
  if (v == "false") return false;
  FailParse(line, "expected true or false");
}

std::uint64_t ParseCount(std::string_view v, std::size_t line) {
  auto n = ParseUint(v);
  if (!n) FailParse(line, "expected a non-negative integer");
  return *n;
}

double ParseReal(std::string_view v, std::size_t line) {
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) FailParse(line, "expected a number");
  return d;
}

}  // namespace

void ParseListen(std::string_view text, std::string& host, std::uint16_t& port) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    Fail(ErrorKind::kInvalidArgument, "listen address must be host:port");
  }
  auto p = ParseUint(text.substr(colon + 1));
  if (!p || *p > 65535) Fail(ErrorKind::kInvalidArgument, "invalid port in listen address");
  host = std::string(text.substr(0, colon));
  if (host.empty()) host = "0.0.0.0";
  port = static_cast<std::uint16_t>(*p);
}

Config ParseConfig(std::string_view text) {
  Config cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view l = Trim(raw);
    if (l.empty() || l.front() == '#') continue;
    if (l.front() == '[') {
      if (l.back() != ']') FailParse(line, "malformed section header");
      section = std::string(Trim(l.substr(1, l.size() - 2)));
      if (!KnownSection(section)) FailParse(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) FailParse(line, "expected key = value");
    const std::string key = section + "." + std::string(Trim(l.substr(0, eq)));
    const std::string value = ParseValue(Trim(l.substr(eq + 1)), line);

    if (key == "store.path") {
      cfg.store_path = value;
    } else if (key == "server.listen") {
      try {
        ParseListen(value, cfg.listen_host, cfg.listen_port);
      } catch (const Error& e) {
        FailParse(line, e.what());
      }
    } else if (key == "server.max_upload_bytes") {
      cfg.max_upload_bytes = ParseCount(value, line);
    } else if (key == "dfr.partition_start_sector") {
      cfg.dfr_geometry.partition_start_sector = ParseCount(value, line);
    } else if (key == "dfr.sector_size") {
      cfg.dfr_geometry.sector_size = static_cast<std::uint32_t>(ParseCount(value, line));
    } else if (key == "dfr.sectors_per_block") {
      cfg.dfr_geometry.sectors_per_block = static_cast<std::uint32_t>(ParseCount(value, line));
    } else if (key == "scoring.similarity_threshold") {
      cfg.evaluator.carving.similarity_threshold = ParseReal(value, line);
    } else if (key == "scoring.strict_sft03") {
      cfg.evaluator.strict_sft03 = ParseBool(value, line);
    } else if (key == "scoring.compare_registry_mtime") {
      cfg.evaluator.registry.compare_mtime = ParseBool(value, line);
    } else {
      FailParse(line, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

Config LoadConfigFile(const std::string& path) {
  auto text = ReadFileText(path);
  if (!text) Fail(ErrorKind::kInvalidArgument, "cannot read config file '" + path + "'");
  return ParseConfig(*text);
}

Config LoadConfig(const std::optional<std::string>& path) {
  Config cfg;
  if (path) {
    cfg = LoadConfigFile(*path);
  } else if (const char* env = std::getenv("DFBENCH_CONFIG"); env && *env) {
    cfg = LoadConfigFile(env);
  }
  if (const char* store = std::getenv("DFBENCH_STORE"); store && *store) {
    cfg.store_path = store;
  }
  if (const char* listen = std::getenv("DFBENCH_LISTEN"); listen && *listen) {
    ParseListen(listen, cfg.listen_host, cfg.listen_port);
  }
  return cfg;
}

}  // namespace dfbench
