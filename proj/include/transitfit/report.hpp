#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "transitfit/descriptive.hpp"
#include "transitfit/ols.hpp"
#include "transitfit/synth.hpp"
#include "transitfit/tsls.hpp"
#include "transitfit/types.hpp"

namespace transitfit {

/// Six-significant-digit rendering for the human-readable tables.
std::string format_human(double v);

/// Parameter table in the usual estimate / t-value / t-critical / decision
/// layout, a diagnostics block, then a machine-readable key-value section.
void render_fit_report(std::ostream& out, const std::string& model_label, const FitResult& fit);

/// Both stage reports share the demand file layout; the supply report also
/// carries the stage linkage summary.
void render_two_stage_supply_report(std::ostream& out, const TwoStageResult& result);
void render_two_stage_demand_report(std::ostream& out, const TwoStageResult& result);

/// "rule,count" table; entries from several labelled reports are prefixed
/// with their label ("parse.missing_field", "supply.nonpositive_log", ...).
void render_exclusions_csv(
    std::ostream& out, const std::vector<std::pair<std::string, const ExclusionReport*>>& reports);

/// "year,mean,n" rows, ascending by year.
void render_yearly_csv(std::ostream& out, const YearlySeries& series);

/// "metric,count,min,max,mean" rows; absent statistics are empty cells.
void render_summary_csv(std::ostream& out, const std::vector<MetricSummary>& table);

struct ValidateCheck {
  std::string name;
  std::string detail;
  bool passed = false;
};

/// Bias table for every estimator x sample size, the threshold checks, an
/// overall verdict, and the machine-readable section.
void render_validate_report(std::ostream& out, const std::vector<BiasCell>& table,
                            const std::vector<ValidateCheck>& checks, bool all_passed);

}  // namespace transitfit
