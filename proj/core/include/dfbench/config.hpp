#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "dfbench/dfr.hpp"
#include "dfbench/evaluator.hpp"

namespace dfbench {

// Plain-text configuration in a TOML-style subset:
//
//   # comment
//   [store]
//   path = "dfbench.db"
//   [server]
//   listen = "127.0.0.1:8080"
//   max_upload_bytes = 67108864
//   [dfr]
//   partition_start_sector = 63
//   sector_size = 512
//   sectors_per_block = 8
//   [scoring]
//   similarity_threshold = 0.20
//   strict_sft03 = false
//   compare_registry_mtime = false
//
// Values may be bare or double-quoted. Unknown keys are rejected.
struct Config {
  std::string store_path = "dfbench.db";
  std::string listen_host = "127.0.0.1";
  std::uint16_t listen_port = 8080;
  std::size_t max_upload_bytes = 64u << 20;
  DfrGeometry dfr_geometry;
  EvaluatorOptions evaluator;
};

// Throws ParseError with the offending line.
Config ParseConfig(std::string_view text);
// Throws InvalidArgument when the file cannot be read.
Config LoadConfigFile(const std::string& path);

// Loads `path` if given, else $DFBENCH_CONFIG if set, else defaults; then
// applies $DFBENCH_STORE and $DFBENCH_LISTEN ("host:port") overrides.
Config LoadConfig(const std::optional<std::string>& path);

// "host:port"; throws InvalidArgument.
void ParseListen(std::string_view text, std::string& host, std::uint16_t& port);

}  // namespace dfbench
