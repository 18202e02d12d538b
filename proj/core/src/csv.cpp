#include "dfbench/csv.hpp"

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

CsvReader::CsvReader(std::istream& in) : in_(in) {}

bool CsvReader::Next(CsvRecord& record) {
  if (!started_) {
    started_ = true;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
            static_cast<unsigned char>(bom[2]) == 0xBF)) {
        FailParse(1, "invalid byte order mark");
      }
    }
  }

  while (true) {
    record.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    record_line_ = next_line_;

    std::string field;
    bool in_quotes = false;
    bool after_quote = false;
    bool any = false;
    while (true) {
      const int ci = in_.get();
      if (ci == std::char_traits<char>::eof()) {
        if (in_quotes) FailParse(record_line_, "unterminated quoted field");
        break;
      }
      any = true;
      const char c = static_cast<char>(ci);
      if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++next_line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        record.push_back(std::move(field));
        field.clear();
        after_quote = false;
        continue;
      }
      if (c == '\r' && in_.peek() == '\n') continue;
      if (c == '\n') {
        ++next_line_;
        break;
      }
      if (after_quote) {
        FailParse(record_line_, "unexpected character after closing quote");
      }
      if (c == '"') {
        if (!field.empty()) {
          FailParse(record_line_, "quote inside unquoted field");
        }
        in_quotes = true;
        continue;
      }
      field.push_back(c);
    }
    if (!any) return false;
    record.push_back(std::move(field));
    if (record.size() == 1 && record[0].empty()) continue;  // blank line
    return true;
  }
}

CsvTable::CsvTable(std::istream& in) : reader_(in) {
  if (!reader_.Next(header_)) FailParse(1, "missing header row");
  for (auto& h : header_) h = std::string(Trim(h));
}

std::optional<std::size_t> CsvTable::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::RequireColumn(std::string_view name) const {
  if (auto c = Column(name)) return *c;
  FailParse(1, "header is missing required column '" + std::string(name) + "'");
}

bool CsvTable::Next(CsvRecord& record) { return reader_.Next(record); }

std::string_view CsvTable::Field(const CsvRecord& record,
                                 std::optional<std::size_t> column) {
  if (!column || *column >= record.size()) return {};
  return record[*column];
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteCsvRecord(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(fields[i]);
  }
  out << '\n';
}

}  // namespace dfbench
