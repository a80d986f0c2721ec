#pragma once

#include <string>
#include <vector>

namespace kalkan {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows, header excluded
};

// RFC 4180 subset: comma separator, double-quote escaping ("" inside quoted
// fields), embedded newlines in quoted fields, CRLF tolerated. Header row
// required. Ragged rows are row errors (1-based data row numbers).
CsvTable parse_csv(const std::string& content);

// Reads and parses; unreadable file is an asset error, undecodable bytes an
// encoding error.
CsvTable read_csv(const std::string& path);

}  // namespace kalkan
