#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dfbench {

using CsvRecord = std::vector<std::string>;

// Streaming RFC 4180 reader: comma-delimited, double-quote escaping, quoted
// fields may span lines. Malformed quoting raises ParseError with the line
// number the record started on. A leading UTF-8 BOM is skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in);

  // Reads the next record; false at end of input. Blank lines are skipped.
  bool Next(CsvRecord& record);

  // Physical line (1-based) on which the most recent record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t next_line_ = 1;
  std::size_t record_line_ = 0;
  bool started_ = false;
};

// A CSV stream whose first record is a header. Columns are looked up by
// exact name.
class CsvTable {
 public:
  explicit CsvTable(std::istream& in);

  const CsvRecord& header() const { return header_; }
  std::optional<std::size_t> Column(std::string_view name) const;
  // Throws ParseError naming the header line when the column is absent.
  std::size_t RequireColumn(std::string_view name) const;

  bool Next(CsvRecord& record);
  std::size_t line() const { return reader_.line(); }

  // Field value or empty string when the column is absent or the record short.
  static std::string_view Field(const CsvRecord& record,
                                std::optional<std::size_t> column);

 private:
  CsvReader reader_;
  CsvRecord header_;
};

std::string CsvEscape(std::string_view field);
void WriteCsvRecord(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace dfbench
