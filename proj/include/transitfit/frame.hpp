#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "transitfit/types.hpp"

namespace transitfit {

/// Which selected variables get a natural-log transform. Nonpositive values
/// under a log flag exclude the row (never an offset shift).
struct LogPolicy {
  enum class Mode { all, none, listed };

  Mode mode = Mode::all;
  std::set<Field> listed;

  bool applies(Field f) const {
    switch (mode) {
      case Mode::all: return true;
      case Mode::none: return false;
      case Mode::listed: return listed.count(f) > 0;
    }
    return false;
  }

  static LogPolicy all() { return {}; }
  static LogPolicy none() { return {Mode::none, {}}; }
  static LogPolicy of(std::set<Field> fields) { return {Mode::listed, std::move(fields)}; }

  /// Parses "all", "none", or a comma-separated variable list.
  static LogPolicy parse(const std::string& text);
};

/// Rectangular numeric data for one regression: a response column, named
/// regressor columns (no intercept column; the intercept is implicit), and
/// per-row provenance.
struct ModelFrame {
  std::string response_name;
  Eigen::VectorXd response;
  std::vector<std::string> regressor_names;
  Eigen::MatrixXd regressors;  // n x m
  std::vector<RowId> rows;
  // Dataset row index per frame row; used for exact stage alignment even
  // when agency-year identifiers repeat. May be empty for ad hoc frames.
  std::vector<std::size_t> source_rows;

  Eigen::Index n() const { return response.size(); }
  Eigen::Index num_regressors() const { return regressors.cols(); }

  /// Throws ShapeError unless all columns have equal length n >= 1 and every
  /// entry is finite.
  void validate() const;
};

struct FrameResult {
  ModelFrame frame;
  ExclusionReport report;
};

/// Assembles a frame by listwise deletion: rows missing any selected value,
/// or nonpositive under a log flag, are excluded and counted. Log-flagged
/// columns hold natural logarithms. Throws DegenerateDataError when every
/// row is excluded.
FrameResult build_model_frame(const Dataset& records, Field response,
                              const std::vector<Field>& regressors,
                              const LogPolicy& log_policy = LogPolicy::all());

}  // namespace transitfit
