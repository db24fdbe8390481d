#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transitfit {

/// Numeric variables of an agency-year record, raw and derived.
/// `voms` appears in model specifications under its customary alias "avoms".
enum class Field : int {
  vrh,                       // vehicle revenue hours per year
  tupt,                      // total unlinked passenger trips per year
  voms,                      // vehicles operated in maximum service
  passenger_miles,           // passenger miles per year
  vrm,                       // vehicle revenue miles per year
  avg_trip_length,           // miles
  service_area_population,   // persons
  service_area_sq_miles,     // square miles
  total_operating_cost,      // currency per year
  total_fares,               // currency per year
  sad,                       // derived: service area density (persons / sq mile)
  acpt,                      // derived: average cost per trip
  afpt,                      // derived: average fares per trip
};

inline constexpr int kFieldCount = 13;
inline constexpr int kRawFieldCount = 10;

const std::vector<Field>& all_fields();
const std::vector<Field>& raw_fields();

/// Canonical lower-case key, e.g. "vrh", "service_area_population".
std::string_view field_key(Field f);

/// Table-style display label, e.g. "VRH", "AVOMS", "AFPT".
std::string_view field_label(Field f);

/// Case-insensitive lookup by key or label; accepts the "avoms" alias.
std::optional<Field> field_from_name(std::string_view name);

/// One transit agency's reported metrics for one fiscal year. Any field
/// except agency_id and year may be missing.
struct AgencyYearRecord {
  std::string agency_id;
  int year = 0;

  std::optional<double> vrh;
  std::optional<double> tupt;
  std::optional<double> voms;
  std::optional<double> passenger_miles;
  std::optional<double> vrm;
  std::optional<double> avg_trip_length;
  std::optional<double> service_area_population;
  std::optional<double> service_area_sq_miles;
  std::optional<double> total_operating_cost;
  std::optional<double> total_fares;
};

/// AgencyYearRecord extended with the derived model variables.
struct DerivedRecord : AgencyYearRecord {
  std::optional<double> sad;
  std::optional<double> acpt;
  std::optional<double> afpt;
};

std::optional<double> field_value(const DerivedRecord& r, Field f);
void set_field_value(DerivedRecord& r, Field f, std::optional<double> v);

using Dataset = std::vector<DerivedRecord>;

/// Row provenance: which agency-year a frame or report row came from.
struct RowId {
  std::string agency_id;
  int year = 0;

  friend bool operator==(const RowId&, const RowId&) = default;
};

std::string to_string(const RowId& id);

/// Per-rule accounting of rows dropped (and cells noted) by an operation.
/// Row-dropping rules participate in the identity
///   rows_in == rows_out + sum(dropped counts);
/// cell-level rules are informational only.
class ExclusionReport {
 public:
  struct Entry {
    std::string rule;
    bool drops_row = false;
    std::size_t count = 0;
    std::vector<RowId> rows;
  };

  std::size_t rows_in = 0;
  std::size_t rows_out = 0;

  void drop_row(std::string_view rule, const RowId& row);
  void note_cell(std::string_view rule, const RowId& row);

  std::size_t dropped_rows() const;
  std::size_t count(std::string_view rule) const;
  bool balanced() const { return rows_in == rows_out + dropped_rows(); }

  /// Entries in first-seen order (deterministic render order).
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Entry& entry(std::string_view rule, bool drops_row);
  std::vector<Entry> entries_;
};

}  // namespace transitfit
