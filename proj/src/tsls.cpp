#include "transitfit/tsls.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <utility>

namespace transitfit {
namespace {

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

// Pairs each frame row with a fitted-column row. Exact dataset indices are
// used when both sides carry them; otherwise agency-year identifiers are
// matched first come, first served.
std::vector<std::pair<Eigen::Index, Eigen::Index>> align_rows(const ModelFrame& frame,
                                                              const FittedColumn& column) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  if (!frame.source_rows.empty() && !column.source_rows.empty()) {
    std::map<std::size_t, Eigen::Index> by_source;
    for (std::size_t i = 0; i < column.source_rows.size(); ++i)
      by_source.emplace(column.source_rows[i], static_cast<Eigen::Index>(i));
    for (std::size_t i = 0; i < frame.source_rows.size(); ++i) {
      auto it = by_source.find(frame.source_rows[i]);
      if (it != by_source.end()) pairs.emplace_back(static_cast<Eigen::Index>(i), it->second);
    }
    return pairs;
  }
  std::map<std::pair<std::string, int>, std::deque<Eigen::Index>> queues;
  for (std::size_t i = 0; i < column.rows.size(); ++i)
    queues[{column.rows[i].agency_id, column.rows[i].year}].push_back(
        static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < frame.rows.size(); ++i) {
    auto it = queues.find({frame.rows[i].agency_id, frame.rows[i].year});
    if (it == queues.end() || it->second.empty()) continue;
    pairs.emplace_back(static_cast<Eigen::Index>(i), it->second.front());
    it->second.pop_front();
  }
  return pairs;
}

StageFit fit_demand_impl(const Dataset& records, const FittedColumn& evrh,
                         const StageSpec& spec, std::vector<Eigen::Index>* alignment_out) {
  evrh.validate();
  spec.validate();

  FrameResult built = build_model_frame(records, spec.response, spec.regressors, spec.log);
  const auto pairs = align_rows(built.frame, evrh);
  if (pairs.empty())
    throw DegenerateDataError("no rows are valid in both the supply and demand stages");

  // Rows valid for the demand variables but absent from the supply stage are
  // excluded here; the report keeps the accounting identity balanced.
  if (pairs.size() < static_cast<std::size_t>(built.frame.n())) {
    std::size_t next = 0;
    for (Eigen::Index i = 0; i < built.frame.n(); ++i) {
      if (next < pairs.size() && pairs[next].first == i) {
        ++next;
        continue;
      }
      built.report.drop_row("not_in_supply_stage", built.frame.rows[i]);
    }
    built.report.rows_out = pairs.size();
  }

  const Eigen::Index n = static_cast<Eigen::Index>(pairs.size());
  ModelFrame frame;
  frame.response_name = built.frame.response_name;
  frame.response.resize(n);
  frame.regressor_names.push_back(evrh.name);
  frame.regressor_names.insert(frame.regressor_names.end(),
                               built.frame.regressor_names.begin(),
                               built.frame.regressor_names.end());
  frame.regressors.resize(n, built.frame.num_regressors() + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [frame_row, evrh_row] = pairs[static_cast<std::size_t>(i)];
    frame.response(i) = built.frame.response(frame_row);
    frame.regressors(i, 0) = evrh.values(evrh_row);
    frame.regressors.row(i).tail(built.frame.num_regressors()) =
        built.frame.regressors.row(frame_row);
    frame.rows.push_back(built.frame.rows[frame_row]);
    if (!built.frame.source_rows.empty())
      frame.source_rows.push_back(built.frame.source_rows[frame_row]);
  }

  if (alignment_out) {
    alignment_out->clear();
    for (const auto& [frame_row, evrh_row] : pairs) alignment_out->push_back(evrh_row);
  }

  StageFit stage;
  stage.fit = fit_ols(frame, spec.inference);
  stage.exclusions = std::move(built.report);
  return stage;
}

}  // namespace

void StageSpec::validate() const {
  if (regressors.empty()) throw SchemaError("stage spec has no regressors");
  for (Field f : regressors) {
    if (f == response)
      throw SchemaError("response " + std::string(field_key(response)) +
                        " cannot also be a regressor");
  }
  for (std::size_t i = 0; i < regressors.size(); ++i) {
    for (std::size_t j = i + 1; j < regressors.size(); ++j) {
      if (regressors[i] == regressors[j])
        throw SchemaError("duplicate regressor: " + std::string(field_key(regressors[i])));
    }
  }
}

StageSpec StageSpec::supply_defaults() {
  StageSpec spec;
  spec.response = Field::vrh;
  spec.regressors = {Field::acpt, Field::sad, Field::voms};
  spec.log = LogPolicy::all();
  return spec;
}

StageSpec StageSpec::demand_defaults() {
  StageSpec spec;
  spec.response = Field::tupt;
  spec.regressors = {Field::afpt};
  spec.log = LogPolicy::all();
  return spec;
}

void FittedColumn::validate() const {
  if (values.size() != static_cast<Eigen::Index>(rows.size()))
    throw ShapeError("fitted column " + name + ": " + std::to_string(values.size()) +
                     " values for " + std::to_string(rows.size()) + " rows");
  if (!source_rows.empty() && source_rows.size() != rows.size())
    throw ShapeError("fitted column " + name + ": source row indices do not match rows");
}

SeMode se_mode_from_name(const std::string& name) {
  if (name == "naive") return SeMode::naive;
  if (name == "corrected") return SeMode::corrected;
  throw ConfigError("unknown se-mode: " + name + " (expected naive or corrected)");
}

std::string_view se_mode_name(SeMode mode) {
  return mode == SeMode::naive ? "naive" : "corrected";
}

StageFit fit_supply(const Dataset& records, const StageSpec& spec) {
  spec.validate();
  FrameResult built = build_model_frame(records, spec.response, spec.regressors, spec.log);
  StageFit stage;
  stage.fit = fit_ols(built.frame, spec.inference);
  stage.exclusions = std::move(built.report);
  return stage;
}

StageFit fit_demand(const Dataset& records, const FittedColumn& evrh, const StageSpec& spec) {
  return fit_demand_impl(records, evrh, spec, nullptr);
}

TwoStageResult fit_two_stage(const Dataset& records, const StageSpec& supply_spec,
                             const StageSpec& demand_spec, SeMode se_mode) {
  TwoStageResult result;
  result.se_mode = se_mode;
  result.supply = in_stage("supply", [&] { return fit_supply(records, supply_spec); });

  FittedColumn evrh;
  evrh.name = kFittedSupplyName;
  evrh.values = result.supply.fit.fitted;
  evrh.rows = result.supply.fit.rows;
  evrh.source_rows = result.supply.fit.source_rows;

  result.demand = in_stage(
      "demand", [&] { return fit_demand_impl(records, evrh, demand_spec, &result.demand_to_supply); });

  result.evrh.name = evrh.name;
  result.evrh.rows = result.demand.fit.rows;
  result.evrh.source_rows = result.demand.fit.source_rows;
  result.evrh.values.resize(static_cast<Eigen::Index>(result.demand_to_supply.size()));
  for (Eigen::Index i = 0; i < result.evrh.values.size(); ++i)
    result.evrh.values(i) = evrh.values(result.demand_to_supply[static_cast<std::size_t>(i)]);

  if (se_mode == SeMode::corrected) {
    in_stage("demand", [&] {
      FitResult& fit = result.demand.fit;
      const Eigen::Index n = fit.diagnostics.n;
      const Eigen::Index k = fit.diagnostics.k;

      // Observed endogenous regressor, in the supply stage's transformed
      // space. Demand rows are a subset of supply rows, so the value is
      // always present and positive under a log flag.
      Eigen::VectorXd observed(n);
      const bool log_response = supply_spec.log.applies(supply_spec.response);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& record = records[fit.source_rows[static_cast<std::size_t>(i)]];
        auto v = field_value(record, supply_spec.response);
        if (!v || (log_response && *v <= 0.0))
          throw DegenerateDataError("observed endogenous value unavailable for row " +
                                    to_string(fit.rows[static_cast<std::size_t>(i)]));
        observed(i) = log_response ? std::log(*v) : *v;
      }

      // y - Xb with the observed column: adjust the naive fitted values by
      // the slope times the column difference.
      const double slope = fit.coefficients[1].estimate;  // fitted supply enters first
      Eigen::VectorXd corrected_residuals =
          fit.diagnostics.residuals - slope * (observed - result.evrh.values);
      const double sigma2 = corrected_residuals.squaredNorm() / static_cast<double>(n - k);
      for (Eigen::Index j = 0; j < k; ++j) {
        auto& est = fit.coefficients[static_cast<std::size_t>(j)];
        const double se = std::sqrt(sigma2 * fit.xtx_inverse_diagonal(j));
        if (se > 0.0) {
          est = t_test(est.estimate, se, est.critical_value, est.name);
        } else {
          est.standard_error = 0.0;
          est.t_statistic = std::numeric_limits<double>::infinity();
          est.significant = est.estimate != 0.0;
        }
      }
      return 0;
    });
  }
  return result;
}

}  // namespace transitfit
