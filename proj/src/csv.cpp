#include "transitfit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "transitfit/errors.hpp"

namespace transitfit::csv {
namespace {

// Splits the full character stream into records, honoring quoted cells.
std::vector<std::vector<std::string>> parse_records(std::istream& in, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> current;
  std::string cell;
  bool in_quotes = false;
  bool cell_started = false;
  bool record_started = false;

  auto end_cell = [&] {
    current.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  auto end_record = [&] {
    end_cell();
    records.push_back(std::move(current));
    current.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"' && !cell_started) {
      in_quotes = true;
      cell_started = true;
      record_started = true;
    } else if (c == delimiter) {
      end_cell();
      record_started = true;
    } else if (c == '\n') {
      if (record_started || cell_started || !current.empty() || !cell.empty()) end_record();
    } else if (c == '\r') {
      // swallowed; \r\n and bare \r both terminate via the following \n or EOF
      if (in.peek() != '\n') {
        if (record_started || cell_started || !current.empty() || !cell.empty()) end_record();
      }
    } else {
      cell.push_back(c);
      cell_started = true;
      record_started = true;
    }
  }
  if (in_quotes) throw IoError("unterminated quoted cell at end of input");
  if (record_started || cell_started || !current.empty() || !cell.empty()) end_record();
  return records;
}

bool needs_quoting(const std::string& cell, char delimiter) {
  return cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
}

void write_cell(std::ostream& out, const std::string& cell, char delimiter) {
  if (!needs_quoting(cell, delimiter)) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

Table read_table(std::istream& in, char delimiter) {
  auto records = parse_records(in, delimiter);
  if (records.empty()) throw IoError("empty input: expected a header row");
  Table t;
  t.header = std::move(records.front());
  t.rows.assign(std::make_move_iterator(records.begin() + 1),
                std::make_move_iterator(records.end()));
  return t;
}

Table read_table_file(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_table(in, delimiter);
}

void write_table(std::ostream& out, const Table& table, char delimiter) {
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      write_cell(out, row[i], delimiter);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

void write_table_file(const std::string& path, const Table& table, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_table(out, table, delimiter);
  if (!out) throw IoError("write failed: " + path);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& cell) {
  std::size_t begin = cell.find_first_not_of(" \t");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = cell.find_last_not_of(" \t") + 1;
  double value = 0.0;
  auto res = std::from_chars(cell.data() + begin, cell.data() + end, value);
  if (res.ec != std::errc() || res.ptr != cell.data() + end) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long> parse_long(const std::string& cell) {
  std::size_t begin = cell.find_first_not_of(" \t");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = cell.find_last_not_of(" \t") + 1;
  long value = 0;
  auto res = std::from_chars(cell.data() + begin, cell.data() + end, value);
  if (res.ec != std::errc() || res.ptr != cell.data() + end) return std::nullopt;
  return value;
}

}  // namespace transitfit::csv
