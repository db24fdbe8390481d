#include "transitfit/descriptive.hpp"

#include <algorithm>
#include <map>

#include "transitfit/errors.hpp"

namespace transitfit {

YearlySeries yearly_mean(const Dataset& records, Field metric) {
  std::map<int, std::pair<double, std::size_t>> by_year;  // year -> (sum, count)
  for (const auto& r : records) {
    auto v = field_value(r, metric);
    if (!v) continue;
    auto& acc = by_year[r.year];
    acc.first += *v;
    acc.second += 1;
  }
  YearlySeries series;
  series.metric = std::string(field_key(metric));
  for (const auto& [year, acc] : by_year) {
    series.points.push_back({year, acc.first / static_cast<double>(acc.second), acc.second});
  }
  return series;
}

YearlySeries yearly_mean(const Dataset& records, const std::string& metric) {
  auto f = field_from_name(metric);
  if (!f) throw SchemaError("unknown metric: " + metric);
  return yearly_mean(records, *f);
}

std::vector<MetricSummary> summary_table(const Dataset& records) {
  std::vector<MetricSummary> table;
  for (Field f : all_fields()) {
    MetricSummary row;
    row.metric = std::string(field_key(f));
    double sum = 0.0;
    for (const auto& r : records) {
      auto v = field_value(r, f);
      if (!v) continue;
      if (row.count == 0) {
        row.min = row.max = *v;
      } else {
        row.min = std::min(*row.min, *v);
        row.max = std::max(*row.max, *v);
      }
      sum += *v;
      ++row.count;
    }
    if (row.count > 0) row.mean = sum / static_cast<double>(row.count);
    table.push_back(std::move(row));
  }
  std::sort(table.begin(), table.end(),
            [](const MetricSummary& a, const MetricSummary& b) { return a.metric < b.metric; });
  return table;
}

const std::vector<Field>& describe_metrics() {
  // One per figure of the descriptive analysis: hours, trips, trip length,
  // peak vehicles, passenger miles, density, cost per trip, fares per trip,
  // revenue miles.
  static const std::vector<Field> metrics{
      Field::vrh,  Field::tupt, Field::avg_trip_length,
      Field::voms, Field::passenger_miles, Field::sad,
      Field::acpt, Field::afpt, Field::vrm,
  };
  return metrics;
}

}  // namespace transitfit
