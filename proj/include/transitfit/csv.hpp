#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace transitfit::csv {

/// A header-bearing delimited text table. Cells are raw strings; quoting and
/// escaping are resolved on read and reapplied on write.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a delimited table. Supports double-quoted cells with "" escapes and
/// embedded delimiters/newlines. Throws IoError on a malformed quoted cell.
Table read_table(std::istream& in, char delimiter = ',');
Table read_table_file(const std::string& path, char delimiter = ',');

void write_table(std::ostream& out, const Table& table, char delimiter = ',');
void write_table_file(const std::string& path, const Table& table, char delimiter = ',');

/// Shortest decimal form that parses back to the same double (to_chars).
std::string format_double(double v);

/// Strict locale-independent parse of a full cell; nullopt when the cell is
/// not a valid finite number.
std::optional<double> parse_double(const std::string& cell);

std::optional<long> parse_long(const std::string& cell);

}  // namespace transitfit::csv
