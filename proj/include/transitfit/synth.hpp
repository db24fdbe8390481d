#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "transitfit/types.hpp"

namespace transitfit {

/// Stateless seed expansion; used to derive independent per-replication
/// seeds so parallel evaluation order cannot change results.
std::uint64_t splitmix64(std::uint64_t& state);
std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count);

/// Seeds, one decimal integer per line; '#' starts a comment.
std::vector<std::uint64_t> load_seed_list(const std::string& path);
void write_seed_list(std::ostream& out, const std::vector<std::uint64_t>& seeds);

/// Deterministic normal sampler: mt19937_64 plus a hand-rolled Box-Muller
/// transform, so the same seed yields the same stream on every platform
/// (std::normal_distribution is implementation-defined).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform01();  // [0, 1)
  double normal();
  /// A standard normal pair with correlation rho.
  std::pair<double, double> correlated_pair(double rho);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct LogNormalSpec {
  double log_mean = 0.0;
  double log_sd = 1.0;
};

/// Ground-truth parameters for the simulation oracle. Both structural
/// equations act in log space; disturbances are jointly normal with
/// correlation rho, which controls the supply/demand simultaneity strength.
struct SynthConfig {
  int n_agencies = 606;
  int n_years = 17;
  int first_year = 2002;

  double supply_intercept = 4.06;
  std::vector<std::pair<Field, double>> supply_slopes = {
      {Field::acpt, 0.22}, {Field::sad, 0.12}, {Field::voms, 0.14}};

  double demand_intercept = 5.38;
  double fitted_supply_slope = 0.98;  // on realized log supply
  std::vector<std::pair<Field, double>> demand_slopes = {{Field::afpt, -0.13}};

  double sigma_supply = 0.35;
  double sigma_demand = 0.50;
  double rho = 0.0;

  /// Log-space regressor distributions. Defaults are calibrated so yearly
  /// averages land in plausible agency ranges (trips in the millions, peak
  /// fleets in the tens-to-hundreds, fares of a dollar or two per trip).
  std::map<Field, LogNormalSpec> regressor_dist = default_regressor_dist();
  LogNormalSpec area_dist{5.0, 0.9};         // service area square miles
  LogNormalSpec trip_length_dist{1.4, 0.4};  // miles per unlinked trip
  LogNormalSpec speed_dist{2.6, 0.25};       // revenue miles per revenue hour

  std::uint64_t seed = 0;

  static std::map<Field, LogNormalSpec> default_regressor_dist();
  void validate() const;
};

struct GroundTruth {
  double supply_intercept = 0.0;
  std::vector<std::pair<std::string, double>> supply_slopes;
  double demand_intercept = 0.0;
  std::vector<std::pair<std::string, double>> demand_slopes;  // fitted supply first
};

struct SynthResult {
  Dataset records;
  GroundTruth truth;
};

/// Draws exogenous regressors, applies the two structural equations with
/// correlated disturbances, and back-solves raw record fields consistent
/// with the derived variables. Identical seed, identical output.
SynthResult generate(const SynthConfig& config);

/// Key-value sidecar describing the generator parameters.
void write_ground_truth(std::ostream& out, const SynthConfig& config);

enum class Estimator {
  ols_direct,  // demand equation on the observed supply response
  two_stage,
};

std::string_view estimator_name(Estimator e);

struct BiasCell {
  Estimator estimator = Estimator::ols_direct;
  int sample_size = 0;
  int replications = 0;
  double mean_bias = 0.0;
  double sd = 0.0;
  double median_abs_error = 0.0;
};

/// Monte Carlo over the seed list: per estimator and sample size, the mean
/// bias, standard deviation and median absolute error of the demand-slope
/// estimate. Deterministic given the seeds, in any evaluation order.
std::vector<BiasCell> bias_experiment(const SynthConfig& base,
                                      const std::vector<int>& sample_sizes,
                                      const std::vector<std::uint64_t>& seeds);

}  // namespace transitfit
