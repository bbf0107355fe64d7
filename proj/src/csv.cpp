#include "epicast/csv.hpp"

#include <fstream>
#include <sstream>

#include "epicast/error.hpp"

namespace epicast {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::vector<std::string>& expected_header,
                   const std::string& source_name) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto fields = split_line(line);
        if (!have_header) {
            if (lineno == 1 && fields.size() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
                fields[0].erase(0, 3);
            }
            if (fields != expected_header) {
                throw ValidationError(source_name + ": expected header '" + join(expected_header) +
                                      "', found '" + join(fields) + "'");
            }
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != expected_header.size()) {
            throw ValidationError(source_name + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(expected_header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
        }
        table.rows.push_back({lineno, std::move(fields)});
    }
    if (!have_header) throw ValidationError(source_name + ": empty file (missing header)");
    return table;
}

CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), expected_header, path);
}

}  // namespace epicast
