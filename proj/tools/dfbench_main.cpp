#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dfbench/api.hpp"
#include "dfbench/batch.hpp"
#include "dfbench/config.hpp"
#include "dfbench/error.hpp"
#include "dfbench/ingest.hpp"
#include "dfbench/store.hpp"

namespace {

dfbench::ApiServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

void PrintFailures(const dfbench::BatchOutcome& outcome) {
  for (const auto& f : outcome.failures) {
    std::cerr << "dfbench: " << f.input << ": " << f.message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores forensic tool output against CFTT-derived ground truth."};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> store_override;
  app.add_option("-c,--config", config_path, "Configuration file (default: $DFBENCH_CONFIG)");
  app.add_option("--store", store_override, "Ground-truth/results database path");

  std::string test_case, input, output, suite_name, input_dir, manifest, import_file;
  std::optional<std::string> listen;
  bool exact = false;
  std::optional<std::uint64_t> partition_start;
  std::optional<std::uint32_t> sector_size, sectors_per_block;

  auto* eval = app.add_subcommand("eval", "Score one batch CSV for a test case");
  eval->add_option("--test-case", test_case, "Test case, e.g. FT-SS-01")->required();
  eval->add_option("--input", input, "Batch CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--output", output, "Report CSV to write")->required();
  eval->add_flag("--exact-scores", exact, "Write scores with 17 significant digits");

  auto* suite = app.add_subcommand("suite", "Score a directory of batch CSVs, one per test case");
  suite->add_option("--suite", suite_name, "Suite name or abbreviation")->required();
  suite->add_option("--input-dir", input_dir, "Directory of <test-case>.csv files")
      ->required()
      ->check(CLI::ExistingDirectory);
  suite->add_option("--output", output, "Combined report CSV to write")->required();
  suite->add_flag("--exact-scores", exact, "Write scores with 17 significant digits");

  auto* ingest = app.add_subcommand("ingest", "Load ground truth from a suite manifest");
  ingest->add_option("--suite", suite_name, "Suite name or abbreviation")->required();
  ingest->add_option("--manifest", manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--partition-start", partition_start, "DFR partition start sector");
  ingest->add_option("--sector-size", sector_size, "DFR sector size in bytes");
  ingest->add_option("--sectors-per-block", sectors_per_block, "DFR sectors per block");

  auto* import = app.add_subcommand("import", "Load ground-truth records from a generic CSV");
  import->add_option("--file", import_file, "CSV with GroundTruthRecord columns")
      ->required()
      ->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Run the HTTP evaluation service");
  serve->add_option("--listen", listen, "host:port (default from config)");

  CLI11_PARSE(app, argc, argv);

  try {
    dfbench::Config cfg = dfbench::LoadConfig(config_path);
    if (store_override) cfg.store_path = *store_override;
    auto store = dfbench::OpenSqliteStore(cfg.store_path);
    dfbench::Evaluator evaluator(*store, cfg.evaluator);
    const dfbench::BatchOptions batch_options{.exact_scores = exact};

    if (*eval) {
      const auto outcome =
          dfbench::RunBatchFile(evaluator, test_case, input, output, batch_options);
      PrintFailures(outcome);
      return outcome.exit_code;
    }
    if (*suite) {
      const auto s = dfbench::ParseSuite(suite_name);
      if (!s) dfbench::Fail(dfbench::ErrorKind::kInvalidArgument, "unknown suite '" + suite_name + "'");
      const auto outcome =
          dfbench::RunSuiteDir(evaluator, *s, input_dir, output, batch_options);
      PrintFailures(outcome);
      return outcome.exit_code;
    }
    if (*ingest) {
      const auto s = dfbench::ParseSuite(suite_name);
      if (!s) dfbench::Fail(dfbench::ErrorKind::kInvalidArgument, "unknown suite '" + suite_name + "'");
      dfbench::IngestOptions options{cfg.dfr_geometry};
      if (partition_start) options.geometry.partition_start_sector = *partition_start;
      if (sector_size) options.geometry.sector_size = *sector_size;
      if (sectors_per_block) options.geometry.sectors_per_block = *sectors_per_block;
      const std::size_t n = dfbench::Ingest(*store, *s, manifest, options);
      std::cout << "ingested " << n << " " << dfbench::SuiteName(*s) << " records\n";
      return 0;
    }
    if (*import) {
      const std::size_t n = dfbench::ImportGroundTruthCsv(*store, import_file);
      std::cout << "imported " << n << " records\n";
      return 0;
    }
    if (*serve) {
      if (listen) dfbench::ParseListen(*listen, cfg.listen_host, cfg.listen_port);
      dfbench::ApiServer server(evaluator, {.max_upload_bytes = cfg.max_upload_bytes});
      const int port = server.Bind(cfg.listen_host, cfg.listen_port);
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cout << "listening on " << cfg.listen_host << ":" << port << std::endl;
      server.Listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const dfbench::Error& e) {
    std::cerr << "dfbench: " << dfbench::ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return dfbench::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "dfbench: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
