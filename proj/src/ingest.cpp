#include "transitfit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "transitfit/errors.hpp"

namespace transitfit {
namespace {

constexpr std::string_view kAgencyIdKey = "agency_id";
constexpr std::string_view kYearKey = "year";

bool is_missing_token(const std::string& cell) {
  std::string t;
  for (char c : cell) {
    if (!std::isspace(static_cast<unsigned char>(c)))
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return t.empty() || t == "na" || t == "n/a" || t == "nan" || t == "null" || t == "-";
}

// Currency fields may legitimately be negative in some exports (refund
// adjustments); everything physical must be >= 0.
bool requires_nonnegative(Field f) {
  return f != Field::total_operating_cost && f != Field::total_fares;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

Schema::Schema() {
  map_[std::string(kAgencyIdKey)] = std::string(kAgencyIdKey);
  map_[std::string(kYearKey)] = std::string(kYearKey);
  for (Field f : raw_fields()) {
    map_[std::string(field_key(f))] = std::string(field_key(f));
  }
}

const std::string& Schema::header_for(const std::string& logical) const {
  auto it = map_.find(logical);
  if (it == map_.end()) throw SchemaError("unknown logical field: " + logical);
  return it->second;
}

void Schema::set(const std::string& logical, const std::string& header) {
  auto it = map_.find(logical);
  if (it == map_.end()) throw SchemaError("unknown logical field: " + logical);
  it->second = header;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file: " + path);
  Schema schema;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected logical=header");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string logical = trim(line.substr(0, eq));
    std::string header = trim(line.substr(eq + 1));
    if (header.empty())
      throw SchemaError(path + ":" + std::to_string(lineno) + ": empty header name");
    schema.set(logical, header);
  }
  return schema;
}

ParseResult parse_dataset(std::istream& source, const Schema& schema,
                          const ParseOptions& options) {
  const csv::Table table = csv::read_table(source, options.delimiter);

  const int agency_col = find_column(table.header, schema.header_for(std::string(kAgencyIdKey)));
  const int year_col = find_column(table.header, schema.header_for(std::string(kYearKey)));
  if (agency_col < 0)
    throw SchemaError("mandatory column missing from header: " +
                      schema.header_for(std::string(kAgencyIdKey)));
  if (year_col < 0)
    throw SchemaError("mandatory column missing from header: " +
                      schema.header_for(std::string(kYearKey)));

  // Optional columns absent from this export simply yield missing fields.
  std::vector<std::pair<Field, int>> numeric_cols;
  for (Field f : raw_fields()) {
    int col = find_column(table.header, schema.header_for(std::string(field_key(f))));
    if (col >= 0) numeric_cols.emplace_back(f, col);
  }

  ParseResult result;
  result.report.rows_in = table.rows.size();

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto cell_at = [&](int col) -> const std::string& {
      static const std::string empty;
      return col < static_cast<int>(row.size()) ? row[col] : empty;
    };

    const std::string& agency = cell_at(agency_col);
    const std::string& year_cell = cell_at(year_col);
    RowId id{agency.empty() ? "row" + std::to_string(r + 1) : agency, 0};

    if (agency.empty()) {
      result.report.drop_row("missing_agency_id", id);
      continue;
    }
    auto year = csv::parse_long(year_cell);
    if (!year) {
      result.report.drop_row(is_missing_token(year_cell) ? "missing_year" : "malformed_year", id);
      continue;
    }
    id.year = static_cast<int>(*year);
    if (*year < options.min_year || *year > options.max_year) {
      result.report.drop_row("year_out_of_range", id);
      continue;
    }

    DerivedRecord record;  // the field setter works on the derived layout
    record.agency_id = agency;
    record.year = static_cast<int>(*year);
    for (auto [field, col] : numeric_cols) {
      const std::string& cell = cell_at(col);
      if (is_missing_token(cell)) {
        result.report.note_cell("missing_field", id);
        continue;
      }
      auto value = csv::parse_double(cell);
      if (!value) {
        result.report.note_cell("malformed_cell", id);
        continue;
      }
      if (requires_nonnegative(field) && *value < 0.0) {
        result.report.note_cell("invalid_value", id);
        continue;
      }
      set_field_value(record, field, value);
    }
    result.records.push_back(static_cast<const AgencyYearRecord&>(record));
  }

  result.report.rows_out = result.records.size();
  return result;
}

ParseResult parse_dataset_file(const std::string& path, const Schema& schema,
                               const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path);
  return parse_dataset(in, schema, options);
}

DerivedRecord derive_variables(const AgencyYearRecord& record) {
  DerivedRecord out;
  static_cast<AgencyYearRecord&>(out) = record;
  if (record.service_area_population && record.service_area_sq_miles &&
      *record.service_area_sq_miles > 0.0) {
    out.sad = *record.service_area_population / *record.service_area_sq_miles;
  }
  if (record.tupt && *record.tupt > 0.0) {
    if (record.total_operating_cost) out.acpt = *record.total_operating_cost / *record.tupt;
    if (record.total_fares) out.afpt = *record.total_fares / *record.tupt;
  }
  return out;
}

Dataset derive_all(const std::vector<AgencyYearRecord>& records) {
  Dataset out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(derive_variables(r));
  return out;
}

void write_dataset(std::ostream& out, const Dataset& records, const Schema& schema,
                   char delimiter) {
  csv::Table table;
  table.header.push_back(schema.header_for(std::string(kAgencyIdKey)));
  table.header.push_back(schema.header_for(std::string(kYearKey)));
  for (Field f : raw_fields()) {
    table.header.push_back(schema.header_for(std::string(field_key(f))));
  }
  for (const auto& record : records) {
    std::vector<std::string> row;
    row.push_back(record.agency_id);
    row.push_back(std::to_string(record.year));
    for (Field f : raw_fields()) {
      auto v = field_value(record, f);
      row.push_back(v ? csv::format_double(*v) : std::string());
    }
    table.rows.push_back(std::move(row));
  }
  csv::write_table(out, table, delimiter);
}

void write_dataset_file(const std::string& path, const Dataset& records,
                        const Schema& schema, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_dataset(out, records, schema, delimiter);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace transitfit
