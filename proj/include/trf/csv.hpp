#pragma once

#include <string>
#include <vector>

namespace trf {

// Minimal CSV support: comma separation, no quoting (none of the artifacts
// we read or write need embedded commas).  Lines starting with '#' and
// blank lines are skipped on read; '#' lines are how we embed provenance
// headers in our own outputs.

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
    std::vector<std::string> header;              // first non-comment row
    std::vector<std::vector<std::string>> rows;   // remaining rows
    std::vector<std::string> comments;            // '#' lines, in order
};

// Reads a whole file.  Throws std::runtime_error if the file cannot be
// opened or if a row has a different field count from the header.
CsvTable read_csv(const std::string& path);

double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);

// Column lookup by name; throws std::runtime_error when missing.
std::size_t column_index(const CsvTable& t, const std::string& name);

} // namespace trf
