#include "transitfit/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace transitfit {
namespace {

struct FieldInfo {
  Field field;
  std::string_view key;
  std::string_view label;
};

constexpr std::array<FieldInfo, kFieldCount> kFields{{
    {Field::vrh, "vrh", "VRH"},
    {Field::tupt, "tupt", "TUPT"},
    {Field::voms, "voms", "AVOMS"},
    {Field::passenger_miles, "passenger_miles", "PASSENGER_MILES"},
    {Field::vrm, "vrm", "VRM"},
    {Field::avg_trip_length, "avg_trip_length", "ATL"},
    {Field::service_area_population, "service_area_population", "POPULATION"},
    {Field::service_area_sq_miles, "service_area_sq_miles", "AREA"},
    {Field::total_operating_cost, "total_operating_cost", "COST"},
    {Field::total_fares, "total_fares", "FARES"},
    {Field::sad, "sad", "SAD"},
    {Field::acpt, "acpt", "ACPT"},
    {Field::afpt, "afpt", "AFPT"},
}};

const FieldInfo& info(Field f) { return kFields[static_cast<int>(f)]; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

const std::vector<Field>& all_fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> v;
    for (const auto& fi : kFields) v.push_back(fi.field);
    return v;
  }();
  return fields;
}

const std::vector<Field>& raw_fields() {
  static const std::vector<Field> fields(all_fields().begin(),
                                         all_fields().begin() + kRawFieldCount);
  return fields;
}

std::string_view field_key(Field f) { return info(f).key; }

std::string_view field_label(Field f) { return info(f).label; }

std::optional<Field> field_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "avoms") return Field::voms;
  for (const auto& fi : kFields) {
    if (n == fi.key || n == lower(fi.label)) return fi.field;
  }
  return std::nullopt;
}

std::optional<double> field_value(const DerivedRecord& r, Field f) {
  switch (f) {
    case Field::vrh: return r.vrh;
    case Field::tupt: return r.tupt;
    case Field::voms: return r.voms;
    case Field::passenger_miles: return r.passenger_miles;
    case Field::vrm: return r.vrm;
    case Field::avg_trip_length: return r.avg_trip_length;
    case Field::service_area_population: return r.service_area_population;
    case Field::service_area_sq_miles: return r.service_area_sq_miles;
    case Field::total_operating_cost: return r.total_operating_cost;
    case Field::total_fares: return r.total_fares;
    case Field::sad: return r.sad;
    case Field::acpt: return r.acpt;
    case Field::afpt: return r.afpt;
  }
  return std::nullopt;
}

void set_field_value(DerivedRecord& r, Field f, std::optional<double> v) {
  switch (f) {
    case Field::vrh: r.vrh = v; return;
    case Field::tupt: r.tupt = v; return;
    case Field::voms: r.voms = v; return;
    case Field::passenger_miles: r.passenger_miles = v; return;
    case Field::vrm: r.vrm = v; return;
    case Field::avg_trip_length: r.avg_trip_length = v; return;
    case Field::service_area_population: r.service_area_population = v; return;
    case Field::service_area_sq_miles: r.service_area_sq_miles = v; return;
    case Field::total_operating_cost: r.total_operating_cost = v; return;
    case Field::total_fares: r.total_fares = v; return;
    case Field::sad: r.sad = v; return;
    case Field::acpt: r.acpt = v; return;
    case Field::afpt: r.afpt = v; return;
  }
}

std::string to_string(const RowId& id) {
  return id.agency_id + ":" + std::to_string(id.year);
}

void ExclusionReport::drop_row(std::string_view rule, const RowId& row) {
  Entry& e = entry(rule, true);
  ++e.count;
  e.rows.push_back(row);
}

void ExclusionReport::note_cell(std::string_view rule, const RowId& row) {
  Entry& e = entry(rule, false);
  ++e.count;
  e.rows.push_back(row);
}

std::size_t ExclusionReport::dropped_rows() const {
  std::size_t total = 0;
  for (const auto& e : entries_) {
    if (e.drops_row) total += e.count;
  }
  return total;
}

std::size_t ExclusionReport::count(std::string_view rule) const {
  for (const auto& e : entries_) {
    if (e.rule == rule) return e.count;
  }
  return 0;
}

ExclusionReport::Entry& ExclusionReport::entry(std::string_view rule, bool drops_row) {
  for (auto& e : entries_) {
    if (e.rule == rule) return e;
  }
  entries_.push_back(Entry{std::string(rule), drops_row, 0, {}});
  return entries_.back();
}

}  // namespace transitfit
