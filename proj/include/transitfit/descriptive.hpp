#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "transitfit/types.hpp"

namespace transitfit {

/// Cross-agency yearly averages of one metric. Years are strictly
/// increasing; each mean covers only rows where the metric is present.
struct YearlySeries {
  struct Point {
    int year = 0;
    double mean = 0.0;
    std::size_t count = 0;
  };

  std::string metric;
  std::vector<Point> points;
};

/// Unweighted mean per year over present values; years with no data are
/// omitted. Throws SchemaError for an unknown metric name.
YearlySeries yearly_mean(const Dataset& records, Field metric);
YearlySeries yearly_mean(const Dataset& records, const std::string& metric);

struct MetricSummary {
  std::string metric;
  std::size_t count = 0;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
};

/// One row per known metric, statistics over present values only; rows
/// ordered by metric name for deterministic output.
std::vector<MetricSummary> summary_table(const Dataset& records);

/// The metrics whose yearly averages the `describe` pipeline emits.
const std::vector<Field>& describe_metrics();

}  // namespace transitfit
