#include "kalkan/csv.hpp"

#include <fstream>
#include <sstream>

#include "kalkan/errors.hpp"
#include "kalkan/utf8.hpp"

namespace kalkan {

CsvTable parse_csv(const std::string& content) {
  if (!utf8::is_valid(content)) {
    raise(ErrorKind::Encoding, "CSV is not valid UTF-8");
  }
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_started = false;
  std::size_t record_no = 0;  // 0 = header

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    if (record_no == 0) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        raise(ErrorKind::Row,
              "row " + std::to_string(record_no) + " has " +
                  std::to_string(record.size()) + " fields, header has " +
                  std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(record));
    }
    record.clear();
    ++record_no;
    record_started = false;
  };

  std::size_t i = 0;
  const std::size_t n = content.size();
  while (i < n) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        record_started = true;
        ++i;
        break;
      case ',':
        end_field();
        record_started = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < n && content[i + 1] == '\n') ++i;
        end_record();
        ++i;
        break;
      case '\n':
        end_record();
        ++i;
        break;
      default:
        field.push_back(c);
        record_started = true;
        ++i;
        break;
    }
  }
  if (in_quotes) {
    raise(ErrorKind::Schema, "unterminated quoted field at end of input");
  }
  // final record without trailing newline
  if (record_started || !record.empty() || !field.empty()) end_record();

  if (table.header.empty()) {
    raise(ErrorKind::Schema, "CSV has no header row");
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorKind::Asset, "cannot open CSV file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace kalkan
