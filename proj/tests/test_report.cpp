#include <doctest.h>

#include <sstream>

#include "transitfit/csv.hpp"
#include "transitfit/report.hpp"
#include "transitfit/synth.hpp"
#include "transitfit/tsls.hpp"

using namespace transitfit;

namespace {

TwoStageResult fitted_example() {
  SynthConfig config;
  config.n_agencies = 300;
  config.n_years = 1;
  config.rho = 0.5;
  config.seed = 321;
  return fit_two_stage(generate(config).records);
}

}  // namespace

TEST_CASE("fit report carries the table layout and a machine section") {
  const TwoStageResult result = fitted_example();
  std::ostringstream out;
  render_two_stage_supply_report(out, result);
  const std::string text = out.str();

  CHECK(text.find("Parameter") != std::string::npos);
  CHECK(text.find("Estimate") != std::string::npos);
  CHECK(text.find("t-critical") != std::string::npos);
  CHECK(text.find("Intercept") != std::string::npos);
  CHECK(text.find("ACPT") != std::string::npos);
  CHECK(text.find("SAD") != std::string::npos);
  CHECK(text.find("AVOMS") != std::string::npos);
  CHECK(text.find("Adjusted R^2") != std::string::npos);
  CHECK(text.find("MAE") != std::string::npos);
  CHECK(text.find("RMSE") != std::string::npos);
  CHECK(text.find("Observations  300") != std::string::npos);
  CHECK(text.find("# machine-readable") != std::string::npos);
  CHECK(text.find("coef.acpt.estimate=") != std::string::npos);

  // machine values round-trip to the stored estimate bit-for-bit
  const std::string key = "coef.acpt.estimate=";
  const auto pos = text.find(key);
  const auto end = text.find('\n', pos);
  const double parsed = *csv::parse_double(text.substr(pos + key.size(), end - pos - key.size()));
  CHECK(parsed == result.supply.fit.slope("acpt").estimate);
}

TEST_CASE("demand report names EVRH and the se mode") {
  const TwoStageResult result = fitted_example();
  std::ostringstream out;
  render_two_stage_demand_report(out, result);
  const std::string text = out.str();
  CHECK(text.find("EVRH") != std::string::npos);
  CHECK(text.find("AFPT") != std::string::npos);
  CHECK(text.find("se_mode=naive") != std::string::npos);
  CHECK(text.find("Stage linkage") != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
  const TwoStageResult result = fitted_example();
  std::ostringstream a, b;
  render_two_stage_demand_report(a, result);
  render_two_stage_demand_report(b, result);
  CHECK(a.str() == b.str());
}

TEST_CASE("exclusions csv uses rule,count columns with stage prefixes") {
  ExclusionReport parse;
  parse.rows_in = 10;
  parse.rows_out = 9;
  parse.drop_row("year_out_of_range", {"A1", 1999});
  ExclusionReport frame;
  frame.rows_in = 9;
  frame.rows_out = 7;
  frame.drop_row("missing_value", {"A2", 2002});
  frame.drop_row("nonpositive_log", {"A3", 2003});

  std::ostringstream out;
  render_exclusions_csv(out, {{"parse", &parse}, {"supply", &frame}});
  const std::string text = out.str();
  CHECK(text.rfind("rule,count\n", 0) == 0);
  CHECK(text.find("parse.year_out_of_range,1\n") != std::string::npos);
  CHECK(text.find("supply.missing_value,1\n") != std::string::npos);
  CHECK(text.find("supply.nonpositive_log,1\n") != std::string::npos);
  CHECK(text.find("parse.rows_in,10\n") != std::string::npos);
  CHECK(text.find("supply.rows_out,7\n") != std::string::npos);
}

TEST_CASE("yearly csv golden") {
  YearlySeries series;
  series.metric = "vrh";
  series.points = {{2002, 20.0, 2}, {2003, 5.0, 1}};
  std::ostringstream out;
  render_yearly_csv(out, series);
  CHECK(out.str() == "year,mean,n\n2002,20,2\n2003,5,1\n");
}

TEST_CASE("summary csv leaves absent statistics empty") {
  std::vector<MetricSummary> table;
  MetricSummary empty;
  empty.metric = "acpt";
  table.push_back(empty);
  MetricSummary filled;
  filled.metric = "vrh";
  filled.count = 2;
  filled.min = 1.0;
  filled.max = 3.0;
  filled.mean = 2.0;
  table.push_back(filled);

  std::ostringstream out;
  render_summary_csv(out, table);
  CHECK(out.str() == "metric,count,min,max,mean\nacpt,0,,,\nvrh,2,1,3,2\n");
}

TEST_CASE("validate report renders checks and verdict") {
  SynthConfig config;
  config.rho = 0.8;
  const auto table = bias_experiment(config, {300}, derive_seeds(5, 3));
  std::vector<ValidateCheck> checks{{"sample_check", "detail", true},
                                    {"other_check", "", false}};
  std::ostringstream out;
  render_validate_report(out, table, checks, false);
  const std::string text = out.str();
  CHECK(text.find("ols-direct") != std::string::npos);
  CHECK(text.find("two-stage") != std::string::npos);
  CHECK(text.find("[pass] sample_check") != std::string::npos);
  CHECK(text.find("[FAIL] other_check") != std::string::npos);
  CHECK(text.find("Verdict: FAIL") != std::string::npos);
  CHECK(text.find("check.sample_check=pass") != std::string::npos);
  CHECK(text.find("verdict=fail") != std::string::npos);
  CHECK(text.find("bias.two-stage.300.mean=") != std::string::npos);
}
