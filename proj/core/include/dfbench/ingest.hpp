#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "dfbench/dfr.hpp"
#include "dfbench/records.hpp"
#include "dfbench/store.hpp"

namespace dfbench {

struct IngestOptions {
  // Default geometry for DFR rows without per-row overrides.
  DfrGeometry geometry;
};

// Builds ground-truth records from one suite manifest (a CSV with a header
// row). Relative paths resolve against the manifest's directory and are
// stored absolute. Manifest columns:
//
//   string_search          test_case, os, type, identifier, line_text
//   deleted_file_recovery  test_case, file_name, size, access_time,
//                          modify_time, change_time, deleted_time, type,
//                          start_sector, dfr_blocks, and optionally
//                          partition_start_sector, sector_size,
//                          sectors_per_block
//   file_carving           test_case, format, carve_type, path
//   windows_registry       test_case, dump_path
//   sqlite                 test_case, database_path, sidecar_path
//
// DFR start_sector is either one absolute sector (the whole file is
// contiguous) or "sector:bytes;sector:bytes..." listing fragments. Rows with
// neither start_sector nor dfr_blocks are stored without blocks. An empty
// carving test_case becomes carve-<conti|non|frag>-<format>.
//
// SQLite: SFT-01 reads the database header and hashes the file; SFT-02
// reads a sidecar with columns table, columns (';'-separated, in order),
// row_count; SFT-03 a sidecar with columns row_id, state (deleted or
// updated), the database name being the file's base name; SFT-04 stores the
// database file's base name.
//
// Errors carry the manifest line. Throws ParseError for malformed rows and
// lets OutOfPartition, GroundTruthUnavailable, NotSqlite and Truncated
// propagate.
std::vector<GroundTruthRecord> ReadManifest(Suite suite, const std::string& manifest_path,
                                            const IngestOptions& options = {});

// ReadManifest followed by an atomic batch insert; returns the number of
// records inserted. Re-ingesting the same manifest throws
// DuplicateGroundTruth and inserts nothing. Records the manifest directory
// as the suite's "source_dir" config entry.
std::size_t Ingest(Store& store, Suite suite, const std::string& manifest_path,
                   const IngestOptions& options = {});

// Generic import: a header row with columns named after the
// GroundTruthRecord fields (test_case, cftt_task, type, os, file_name,
// size, access_time_stamp, modify_time_stamp, change_time_stamp,
// deleted_time_stamp, dfr_blocks, carve_type, payload). Absent columns and
// empty cells leave the field unset; cftt_task defaults to the suite
// inferred from test_case.
std::vector<GroundTruthRecord> ReadGroundTruthCsv(std::istream& in);
std::size_t ImportGroundTruthCsv(Store& store, const std::string& path);

}  // namespace dfbench
