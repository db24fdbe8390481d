#include <doctest.h>

#include <map>
#include <random>

#include "transitfit/descriptive.hpp"
#include "transitfit/errors.hpp"

using namespace transitfit;

namespace {

DerivedRecord record(const std::string& id, int year, std::optional<double> vrh,
                     std::optional<double> tupt = std::nullopt) {
  DerivedRecord r;
  r.agency_id = id;
  r.year = year;
  r.vrh = vrh;
  r.tupt = tupt;
  return r;
}

// Independent group-by oracle over a plain map.
YearlySeries brute_force_yearly(const Dataset& records, Field metric) {
  std::map<int, std::vector<double>> groups;
  for (const auto& r : records) {
    if (auto v = field_value(r, metric)) groups[r.year].push_back(*v);
  }
  YearlySeries out;
  out.metric = std::string(field_key(metric));
  for (const auto& [year, values] : groups) {
    double sum = 0.0;
    for (double v : values) sum += v;
    out.points.push_back({year, sum / static_cast<double>(values.size()), values.size()});
  }
  return out;
}

}  // namespace

TEST_CASE("yearly_mean of a single record") {
  const Dataset records{record("A", 2002, 10.0)};
  const YearlySeries s = yearly_mean(records, Field::vrh);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].year == 2002);
  CHECK(s.points[0].mean == 10.0);
  CHECK(s.points[0].count == 1);
}

TEST_CASE("yearly_mean groups by year") {
  const Dataset records{record("A", 2002, 10.0), record("B", 2002, 30.0),
                        record("C", 2003, 5.0)};
  const YearlySeries s = yearly_mean(records, Field::vrh);
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[0].year == 2002);
  CHECK(s.points[0].mean == 20.0);
  CHECK(s.points[0].count == 2);
  CHECK(s.points[1].year == 2003);
  CHECK(s.points[1].mean == 5.0);
  CHECK(s.points[1].count == 1);
}

TEST_CASE("yearly_mean skips missing values and empty years") {
  const Dataset records{record("A", 2002, std::nullopt), record("B", 2003, 7.0)};
  const YearlySeries s = yearly_mean(records, Field::vrh);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].year == 2003);
}

TEST_CASE("yearly_mean rejects unknown metric names") {
  CHECK_THROWS_AS(yearly_mean(Dataset{}, "not_a_field"), SchemaError);
  CHECK_NOTHROW(yearly_mean(Dataset{}, "avoms"));
}

TEST_CASE("yearly_mean matches the brute-force oracle on random datasets") {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1e6);
  for (int rep = 0; rep < 200; ++rep) {
    Dataset records;
    const int n = static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      records.push_back(record("A" + std::to_string(i % 7), 2002 + static_cast<int>(rng() % 17),
                               rng() % 5 ? std::optional<double>(u(rng)) : std::nullopt));
    }
    const YearlySeries fast = yearly_mean(records, Field::vrh);
    const YearlySeries slow = brute_force_yearly(records, Field::vrh);
    REQUIRE(fast.points.size() == slow.points.size());
    for (std::size_t i = 0; i < fast.points.size(); ++i) {
      CHECK(fast.points[i].year == slow.points[i].year);
      CHECK(fast.points[i].count == slow.points[i].count);
      CHECK(fast.points[i].mean == doctest::Approx(slow.points[i].mean).epsilon(1e-12));
    }
    // years strictly increasing
    for (std::size_t i = 1; i < fast.points.size(); ++i)
      CHECK(fast.points[i].year > fast.points[i - 1].year);
  }
}

TEST_CASE("adding a record for year Y changes only the year-Y point") {
  Dataset records{record("A", 2002, 10.0), record("B", 2003, 6.0)};
  const YearlySeries before = yearly_mean(records, Field::vrh);
  records.push_back(record("C", 2003, 10.0));
  const YearlySeries after = yearly_mean(records, Field::vrh);
  REQUIRE(before.points.size() == 2);
  REQUIRE(after.points.size() == 2);
  CHECK(after.points[0].mean == before.points[0].mean);
  CHECK(after.points[0].count == before.points[0].count);
  CHECK(after.points[1].mean != before.points[1].mean);
}

TEST_CASE("summary_table on the empty dataset") {
  const auto table = summary_table(Dataset{});
  CHECK(table.size() == static_cast<std::size_t>(kFieldCount));
  for (const auto& row : table) {
    CHECK(row.count == 0);
    CHECK_FALSE(row.min.has_value());
    CHECK_FALSE(row.max.has_value());
    CHECK_FALSE(row.mean.has_value());
  }
}

TEST_CASE("summary_table single and double element statistics") {
  Dataset records{record("A", 2002, std::nullopt, 100.0)};
  auto find = [](const std::vector<MetricSummary>& table, const std::string& name) {
    for (const auto& row : table) {
      if (row.metric == name) return row;
    }
    FAIL("missing metric row");
    return MetricSummary{};
  };

  auto table = summary_table(records);
  auto tupt_row = find(table, "tupt");
  CHECK(tupt_row.count == 1);
  CHECK(tupt_row.min == 100.0);
  CHECK(tupt_row.max == 100.0);
  CHECK(tupt_row.mean == 100.0);

  records.push_back(record("B", 2003, std::nullopt, 300.0));
  table = summary_table(records);
  tupt_row = find(table, "tupt");
  CHECK(tupt_row.count == 2);
  CHECK(tupt_row.mean == 200.0);

  // rows are sorted by metric name
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i - 1].metric < table[i].metric);
}

TEST_CASE("summary_table satisfies min <= mean <= max") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  Dataset records;
  for (int i = 0; i < 100; ++i) {
    DerivedRecord r = record("A", 2002 + i % 17, u(rng) + 600.0, u(rng) + 600.0);
    r.total_fares = u(rng);  // may be negative
    records.push_back(r);
  }
  for (const auto& row : summary_table(records)) {
    if (row.count == 0) continue;
    CHECK(*row.min <= *row.mean);
    CHECK(*row.mean <= *row.max);
  }
}

TEST_CASE("describe_metrics lists the nine figure metrics") {
  const auto& metrics = describe_metrics();
  CHECK(metrics.size() == 9);
  CHECK(metrics.front() == Field::vrh);
  CHECK(metrics.back() == Field::vrm);
}
