#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "transitfit/errors.hpp"
#include "transitfit/frame.hpp"
#include "transitfit/ols.hpp"
#include "transitfit/types.hpp"

namespace transitfit {

/// Names the failing stage of a two-stage run while preserving the
/// underlying error kind.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + " stage: " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Response, regressors, transform and inference configuration for one
/// estimation stage. Stage-two specs list only dataset variables; the
/// fitted supply column always enters first.
struct StageSpec {
  Field response = Field::vrh;
  std::vector<Field> regressors;
  LogPolicy log = LogPolicy::all();
  InferenceSpec inference;

  void validate() const;

  /// VRH on ACPT, SAD and AVOMS, all log-transformed.
  static StageSpec supply_defaults();
  /// TUPT on the fitted supply column plus AFPT, log-transformed.
  static StageSpec demand_defaults();
};

/// A fitted column aligned to the rows it was predicted for.
struct FittedColumn {
  std::string name;
  Eigen::VectorXd values;
  std::vector<RowId> rows;
  std::vector<std::size_t> source_rows;  // optional dataset indices

  void validate() const;
};

/// Name under which the fitted supply column enters the demand stage.
inline constexpr const char* kFittedSupplyName = "evrh";

struct StageFit {
  FitResult fit;
  ExclusionReport exclusions;
};

/// How second-stage standard errors are computed. `naive` takes the
/// plain OLS errors from the fitted-regressor frame; `corrected` recomputes
/// the residual variance with the observed endogenous regressor before
/// scaling. Coefficients are identical either way.
enum class SeMode { naive, corrected };

SeMode se_mode_from_name(const std::string& name);
std::string_view se_mode_name(SeMode mode);

struct TwoStageResult {
  StageFit supply;
  StageFit demand;
  FittedColumn evrh;                        // restricted to demand rows
  std::vector<Eigen::Index> demand_to_supply;  // demand row -> supply row
  SeMode se_mode = SeMode::naive;
};

/// Stage one: build the supply frame and fit it by OLS.
StageFit fit_supply(const Dataset& records, const StageSpec& spec = StageSpec::supply_defaults());

/// Stage two: OLS of the demand response on the fitted supply column plus
/// the exogenous demand regressors, over rows valid in both stages.
StageFit fit_demand(const Dataset& records, const FittedColumn& evrh,
                    const StageSpec& spec = StageSpec::demand_defaults());

/// The full pipeline: supply fit, fitted values, demand fit, stage linkage.
TwoStageResult fit_two_stage(const Dataset& records,
                             const StageSpec& supply_spec = StageSpec::supply_defaults(),
                             const StageSpec& demand_spec = StageSpec::demand_defaults(),
                             SeMode se_mode = SeMode::naive);

}  // namespace transitfit
