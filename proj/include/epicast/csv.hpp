#pragma once

#include <string>
#include <vector>

namespace epicast {

struct CsvRow {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

/// Reads a comma-separated file with a header line. Double-quoted fields may
/// contain commas. Blank lines are skipped; CRLF endings are accepted.
/// Throws IoError when the file cannot be opened and ValidationError when the
/// header differs from `expected_header` or a row has the wrong field count.
CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected_header);

CsvTable parse_csv(const std::string& text, const std::vector<std::string>& expected_header,
                   const std::string& source_name);

}  // namespace epicast
