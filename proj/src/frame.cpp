#include "transitfit/frame.hpp"

#include <cmath>
#include <sstream>

#include "transitfit/errors.hpp"

namespace transitfit {

LogPolicy LogPolicy::parse(const std::string& text) {
  if (text == "all") return LogPolicy::all();
  if (text == "none") return LogPolicy::none();
  std::set<Field> fields;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto b = name.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = name.find_last_not_of(" \t");
    auto f = field_from_name(name.substr(b, e - b + 1));
    if (!f) throw SchemaError("unknown variable in log list: " + name);
    fields.insert(*f);
  }
  return LogPolicy::of(std::move(fields));
}

void ModelFrame::validate() const {
  if (response.size() < 1) throw ShapeError("model frame is empty");
  if (regressors.rows() != response.size())
    throw ShapeError("regressor rows do not match response length");
  if (static_cast<Eigen::Index>(regressor_names.size()) != regressors.cols())
    throw ShapeError("regressor name count does not match column count");
  if (static_cast<Eigen::Index>(rows.size()) != response.size())
    throw ShapeError("row provenance does not match response length");
  if (!source_rows.empty() && source_rows.size() != rows.size())
    throw ShapeError("source row indices do not match provenance length");
  if (!response.allFinite() || !regressors.allFinite())
    throw ShapeError("model frame contains non-finite entries");
}

FrameResult build_model_frame(const Dataset& records, Field response,
                              const std::vector<Field>& regressors,
                              const LogPolicy& log_policy) {
  std::vector<Field> selected;
  selected.push_back(response);
  selected.insert(selected.end(), regressors.begin(), regressors.end());

  FrameResult result;
  result.report.rows_in = records.size();

  std::vector<std::vector<double>> columns(selected.size());
  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    const auto& record = records[idx];
    const RowId id{record.agency_id, record.year};
    std::vector<double> values;
    values.reserve(selected.size());
    const char* drop_rule = nullptr;
    for (Field f : selected) {
      auto v = field_value(record, f);
      if (!v) {
        drop_rule = "missing_value";
        break;
      }
      if (log_policy.applies(f)) {
        if (*v <= 0.0) {
          drop_rule = "nonpositive_log";
          break;
        }
        values.push_back(std::log(*v));
      } else {
        values.push_back(*v);
      }
    }
    if (drop_rule) {
      result.report.drop_row(drop_rule, id);
      continue;
    }
    for (std::size_t j = 0; j < selected.size(); ++j) columns[j].push_back(values[j]);
    result.frame.rows.push_back(id);
    result.frame.source_rows.push_back(idx);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(result.frame.rows.size());
  result.report.rows_out = static_cast<std::size_t>(n);
  if (n == 0)
    throw DegenerateDataError("all " + std::to_string(records.size()) +
                              " rows excluded while building the model frame");

  result.frame.response_name = std::string(field_key(response));
  result.frame.response =
      Eigen::Map<const Eigen::VectorXd>(columns[0].data(), n);
  result.frame.regressors.resize(n, static_cast<Eigen::Index>(regressors.size()));
  for (std::size_t j = 0; j < regressors.size(); ++j) {
    result.frame.regressor_names.emplace_back(field_key(regressors[j]));
    result.frame.regressors.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(columns[j + 1].data(), n);
  }
  result.frame.validate();
  return result;
}

}  // namespace transitfit
