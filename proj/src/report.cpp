#include "transitfit/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ostream>

#include "transitfit/csv.hpp"

namespace transitfit {
namespace {

std::string display_name(const std::string& coefficient_name) {
  if (coefficient_name == "Intercept") return coefficient_name;
  if (coefficient_name == kFittedSupplyName) return "EVRH";
  if (auto f = field_from_name(coefficient_name)) return std::string(field_label(*f));
  std::string upper = coefficient_name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return upper;
}

void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t j = 0; j < row.size(); ++j) widths[j] = std::max(widths[j], row[j].size());
  }
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << row[j];
      if (j + 1 < row.size()) out << std::string(widths[j] - row[j].size() + 2, ' ');
    }
    out << '\n';
  }
}

void render_fit_body(std::ostream& out, const FitResult& fit) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Parameter", "Estimate", "t-value", "t-critical", "Decision"});
  for (const auto& c : fit.coefficients) {
    rows.push_back({display_name(c.name), format_human(c.estimate), format_human(c.t_statistic),
                    format_human(c.critical_value),
                    c.significant ? "Significant" : "Not significant"});
  }
  rows.push_back({"Adjusted R^2", format_human(fit.diagnostics.adjusted_r_squared)});
  rows.push_back({"MAE", format_human(fit.diagnostics.mae)});
  rows.push_back({"RMSE", format_human(fit.diagnostics.rmse)});
  rows.push_back({"Observations", std::to_string(fit.diagnostics.n)});
  write_aligned(out, rows);
}

void render_fit_machine(std::ostream& out, const std::string& model_label, const FitResult& fit) {
  out << "model=" << model_label << '\n';
  out << "response=" << fit.response_name << '\n';
  out << "n=" << fit.diagnostics.n << '\n';
  out << "k=" << fit.diagnostics.k << '\n';
  out << "adjusted_r_squared=" << csv::format_double(fit.diagnostics.adjusted_r_squared) << '\n';
  out << "mae=" << csv::format_double(fit.diagnostics.mae) << '\n';
  out << "rmse=" << csv::format_double(fit.diagnostics.rmse) << '\n';
  for (const auto& c : fit.coefficients) {
    const std::string key = "coef." + c.name;
    out << key << ".estimate=" << csv::format_double(c.estimate) << '\n';
    out << key << ".se=" << csv::format_double(c.standard_error) << '\n';
    out << key << ".t=" << csv::format_double(c.t_statistic) << '\n';
    out << key << ".critical=" << csv::format_double(c.critical_value) << '\n';
    out << key << ".significant=" << (c.significant ? "true" : "false") << '\n';
  }
}

}  // namespace

std::string format_human(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void render_fit_report(std::ostream& out, const std::string& model_label, const FitResult& fit) {
  out << "Parameter Estimates for the " << model_label << " Model\n\n";
  render_fit_body(out, fit);
  out << "\n# machine-readable\n";
  render_fit_machine(out, model_label, fit);
}

void render_two_stage_supply_report(std::ostream& out, const TwoStageResult& result) {
  render_fit_report(out, "Supply", result.supply.fit);
}

void render_two_stage_demand_report(std::ostream& out, const TwoStageResult& result) {
  out << "Parameter Estimates for the Demand Model\n\n";
  render_fit_body(out, result.demand.fit);
  out << "\nStage linkage: " << result.demand.fit.diagnostics.n << " of "
      << result.supply.fit.diagnostics.n
      << " supply-stage rows enter the demand stage; standard errors are "
      << se_mode_name(result.se_mode) << ".\n";
  out << "\n# machine-readable\n";
  render_fit_machine(out, "Demand", result.demand.fit);
  out << "se_mode=" << se_mode_name(result.se_mode) << '\n';
  out << "supply_rows=" << result.supply.fit.diagnostics.n << '\n';
  out << "demand_rows=" << result.demand.fit.diagnostics.n << '\n';
}

void render_exclusions_csv(
    std::ostream& out,
    const std::vector<std::pair<std::string, const ExclusionReport*>>& reports) {
  out << "rule,count\n";
  for (const auto& [label, report] : reports) {
    const std::string prefix = label.empty() ? "" : label + ".";
    out << prefix << "rows_in," << report->rows_in << '\n';
    for (const auto& entry : report->entries())
      out << prefix << entry.rule << ',' << entry.count << '\n';
    out << prefix << "rows_out," << report->rows_out << '\n';
  }
}

void render_yearly_csv(std::ostream& out, const YearlySeries& series) {
  out << "year,mean,n\n";
  for (const auto& p : series.points)
    out << p.year << ',' << csv::format_double(p.mean) << ',' << p.count << '\n';
}

void render_summary_csv(std::ostream& out, const std::vector<MetricSummary>& table) {
  out << "metric,count,min,max,mean\n";
  for (const auto& row : table) {
    auto cell = [](const std::optional<double>& v) {
      return v ? csv::format_double(*v) : std::string();
    };
    out << row.metric << ',' << row.count << ',' << cell(row.min) << ',' << cell(row.max) << ','
        << cell(row.mean) << '\n';
  }
}

void render_validate_report(std::ostream& out, const std::vector<BiasCell>& table,
                            const std::vector<ValidateCheck>& checks, bool all_passed) {
  out << "Demand-Slope Bias by Estimator and Sample Size\n\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Estimator", "n", "Replications", "MeanBias", "SD", "MedianAbsErr"});
  for (const auto& cell : table) {
    rows.push_back({std::string(estimator_name(cell.estimator)),
                    std::to_string(cell.sample_size), std::to_string(cell.replications),
                    format_human(cell.mean_bias), format_human(cell.sd),
                    format_human(cell.median_abs_error)});
  }
  write_aligned(out, rows);

  out << "\nChecks\n";
  for (const auto& check : checks) {
    out << "  [" << (check.passed ? "pass" : "FAIL") << "] " << check.name;
    if (!check.detail.empty()) out << " (" << check.detail << ")";
    out << '\n';
  }
  out << "\nVerdict: " << (all_passed ? "PASS" : "FAIL") << '\n';

  out << "\n# machine-readable\n";
  for (const auto& cell : table) {
    const std::string key =
        "bias." + std::string(estimator_name(cell.estimator)) + "." + std::to_string(cell.sample_size);
    out << key << ".replications=" << cell.replications << '\n';
    out << key << ".mean=" << csv::format_double(cell.mean_bias) << '\n';
    out << key << ".sd=" << csv::format_double(cell.sd) << '\n';
    out << key << ".median_abs_error=" << csv::format_double(cell.median_abs_error) << '\n';
  }
  for (const auto& check : checks)
    out << "check." << check.name << "=" << (check.passed ? "pass" : "fail") << '\n';
  out << "verdict=" << (all_passed ? "pass" : "fail") << '\n';
}

}  // namespace transitfit
