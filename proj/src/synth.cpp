#include "transitfit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "transitfit/csv.hpp"
#include "transitfit/errors.hpp"
#include "transitfit/frame.hpp"
#include "transitfit/tsls.hpp"

namespace transitfit {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(count);
  std::uint64_t state = master;
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(splitmix64(state));
  return seeds;
}

std::vector<std::uint64_t> load_seed_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open seed list: " + path);
  std::vector<std::uint64_t> seeds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::uint64_t seed = 0;
    if (ss >> seed) {
      seeds.push_back(seed);
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected a seed integer");
    }
  }
  if (seeds.empty()) throw ConfigError("seed list is empty: " + path);
  return seeds;
}

void write_seed_list(std::ostream& out, const std::vector<std::uint64_t>& seeds) {
  for (auto s : seeds) out << s << '\n';
}

double NormalSampler::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::pair<double, double> NormalSampler::correlated_pair(double rho) {
  const double z1 = normal();
  const double z2 = normal();
  return {z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2};
}

std::map<Field, LogNormalSpec> SynthConfig::default_regressor_dist() {
  return {
      {Field::acpt, {1.6, 0.6}},  // a few dollars of cost per trip
      {Field::sad, {7.6, 0.8}},   // around two thousand persons per sq mile
      {Field::voms, {3.9, 1.3}},  // tens to a few hundred peak vehicles
      {Field::afpt, {0.0, 0.7}},  // around a dollar of fares per trip
  };
}

void SynthConfig::validate() const {
  if (n_agencies < 1 || n_years < 1 ||
      static_cast<long long>(n_agencies) * n_years < 1)
    throw ConfigError("need n_agencies x n_years >= 1");
  if (!(sigma_supply >= 0.0) || !(sigma_demand >= 0.0))
    throw ConfigError("noise standard deviations must be >= 0");
  if (!(std::abs(rho) <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
  auto check_dist = [](const LogNormalSpec& d, const char* what) {
    if (!std::isfinite(d.log_mean) || !(d.log_sd >= 0.0))
      throw ConfigError(std::string("invalid distribution for ") + what);
  };
  for (const auto& [field, dist] : regressor_dist)
    check_dist(dist, std::string(field_key(field)).c_str());
  check_dist(area_dist, "service area");
  check_dist(trip_length_dist, "trip length");
  check_dist(speed_dist, "revenue speed");
  auto check_slopes = [this](const std::vector<std::pair<Field, double>>& slopes) {
    for (const auto& [field, beta] : slopes) {
      if (!std::isfinite(beta)) throw ConfigError("non-finite slope");
      if (!regressor_dist.count(field))
        throw ConfigError("no distribution configured for regressor " +
                          std::string(field_key(field)));
    }
  };
  check_slopes(supply_slopes);
  check_slopes(demand_slopes);
  if (!std::isfinite(supply_intercept) || !std::isfinite(demand_intercept) ||
      !std::isfinite(fitted_supply_slope))
    throw ConfigError("non-finite intercept or slope");
}

SynthResult generate(const SynthConfig& config) {
  config.validate();
  NormalSampler rng(config.seed);

  const int id_width =
      std::max<int>(4, static_cast<int>(std::to_string(config.n_agencies).size()));

  SynthResult result;
  result.records.reserve(static_cast<std::size_t>(config.n_agencies) * config.n_years);

  for (int a = 0; a < config.n_agencies; ++a) {
    std::string id = std::to_string(a + 1);
    id.insert(0, static_cast<std::size_t>(id_width) - std::min<std::size_t>(id.size(), id_width),
              '0');
    id.insert(0, "A");
    for (int y = 0; y < config.n_years; ++y) {
      DerivedRecord r;
      r.agency_id = id;
      r.year = config.first_year + y;

      std::map<Field, double> log_values;
      for (const auto& [field, dist] : config.regressor_dist)
        log_values[field] = dist.log_mean + dist.log_sd * rng.normal();
      const double log_area = config.area_dist.log_mean + config.area_dist.log_sd * rng.normal();
      const double log_atl =
          config.trip_length_dist.log_mean + config.trip_length_dist.log_sd * rng.normal();
      const double log_speed =
          config.speed_dist.log_mean + config.speed_dist.log_sd * rng.normal();

      const auto [z_supply, z_demand] = rng.correlated_pair(config.rho);

      double log_vrh = config.supply_intercept + config.sigma_supply * z_supply;
      for (const auto& [field, beta] : config.supply_slopes)
        log_vrh += beta * log_values.at(field);

      // Demand responds to the realized (noisy) supply; with rho != 0 its
      // disturbance is correlated with the supply disturbance, which is
      // exactly the simultaneity a direct OLS fit cannot handle.
      double log_tupt =
          config.demand_intercept + config.fitted_supply_slope * log_vrh +
          config.sigma_demand * z_demand;
      for (const auto& [field, beta] : config.demand_slopes)
        log_tupt += beta * log_values.at(field);

      const double vrh = std::exp(log_vrh);
      const double tupt = std::exp(log_tupt);
      const double area = std::exp(log_area);

      r.vrh = vrh;
      r.tupt = tupt;
      r.sad = std::exp(log_values.at(Field::sad));
      r.acpt = std::exp(log_values.at(Field::acpt));
      r.afpt = std::exp(log_values.at(Field::afpt));
      if (auto it = log_values.find(Field::voms); it != log_values.end())
        r.voms = std::exp(it->second);
      if (auto it = log_values.find(Field::avg_trip_length); it != log_values.end())
        r.avg_trip_length = std::exp(it->second);
      else
        r.avg_trip_length = std::exp(log_atl);

      // Raw fields back-solved so re-deriving sad/acpt/afpt reproduces the
      // drawn values (up to a rounding ulp).
      r.service_area_sq_miles = area;
      r.service_area_population = *r.sad * area;
      r.total_operating_cost = *r.acpt * tupt;
      r.total_fares = *r.afpt * tupt;
      r.passenger_miles = tupt * *r.avg_trip_length;
      r.vrm = vrh * std::exp(log_speed);

      result.records.push_back(std::move(r));
    }
  }

  result.truth.supply_intercept = config.supply_intercept;
  for (const auto& [field, beta] : config.supply_slopes)
    result.truth.supply_slopes.emplace_back(std::string(field_key(field)), beta);
  result.truth.demand_intercept = config.demand_intercept;
  result.truth.demand_slopes.emplace_back(kFittedSupplyName, config.fitted_supply_slope);
  for (const auto& [field, beta] : config.demand_slopes)
    result.truth.demand_slopes.emplace_back(std::string(field_key(field)), beta);
  return result;
}

void write_ground_truth(std::ostream& out, const SynthConfig& config) {
  out << "seed=" << config.seed << '\n';
  out << "n_agencies=" << config.n_agencies << '\n';
  out << "n_years=" << config.n_years << '\n';
  out << "first_year=" << config.first_year << '\n';
  out << "rho=" << csv::format_double(config.rho) << '\n';
  out << "sigma_supply=" << csv::format_double(config.sigma_supply) << '\n';
  out << "sigma_demand=" << csv::format_double(config.sigma_demand) << '\n';
  out << "supply.intercept=" << csv::format_double(config.supply_intercept) << '\n';
  for (const auto& [field, beta] : config.supply_slopes)
    out << "supply.slope." << field_key(field) << "=" << csv::format_double(beta) << '\n';
  out << "demand.intercept=" << csv::format_double(config.demand_intercept) << '\n';
  out << "demand.slope." << kFittedSupplyName << "="
      << csv::format_double(config.fitted_supply_slope) << '\n';
  for (const auto& [field, beta] : config.demand_slopes)
    out << "demand.slope." << field_key(field) << "=" << csv::format_double(beta) << '\n';
}

std::string_view estimator_name(Estimator e) {
  return e == Estimator::ols_direct ? "ols-direct" : "two-stage";
}

namespace {

double demand_slope_two_stage(const Dataset& records) {
  const TwoStageResult result = fit_two_stage(records);
  return result.demand.fit.slope(kFittedSupplyName).estimate;
}

double demand_slope_ols_direct(const Dataset& records, const SynthConfig& config) {
  // The demand equation estimated directly on the observed supply response.
  std::vector<Field> regressors;
  regressors.push_back(Field::vrh);
  for (const auto& [field, beta] : config.demand_slopes) regressors.push_back(field);
  FrameResult built = build_model_frame(records, Field::tupt, regressors, LogPolicy::all());
  const FitResult fit = fit_ols(built.frame);
  return fit.slope(std::string(field_key(Field::vrh))).estimate;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<BiasCell> bias_experiment(const SynthConfig& base,
                                      const std::vector<int>& sample_sizes,
                                      const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("bias_experiment: need at least one replication seed");
  base.validate();

  std::vector<BiasCell> table;
  for (int n : sample_sizes) {
    if (n < 1) throw ConfigError("bias_experiment: sample sizes must be >= 1");
    std::vector<double> bias_two_stage, bias_ols;
    bias_two_stage.reserve(seeds.size());
    bias_ols.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      SynthConfig config = base;
      config.seed = seed;
      config.n_agencies = n;
      config.n_years = 1;
      const SynthResult synth = generate(config);
      bias_two_stage.push_back(demand_slope_two_stage(synth.records) -
                               config.fitted_supply_slope);
      bias_ols.push_back(demand_slope_ols_direct(synth.records, config) -
                         config.fitted_supply_slope);
    }

    auto summarize = [&](Estimator estimator, const std::vector<double>& biases) {
      BiasCell cell;
      cell.estimator = estimator;
      cell.sample_size = n;
      cell.replications = static_cast<int>(biases.size());
      double sum = 0.0;
      for (double b : biases) sum += b;
      cell.mean_bias = sum / static_cast<double>(biases.size());
      double ss = 0.0;
      for (double b : biases) ss += (b - cell.mean_bias) * (b - cell.mean_bias);
      cell.sd = biases.size() > 1
                    ? std::sqrt(ss / static_cast<double>(biases.size() - 1))
                    : 0.0;
      std::vector<double> abs_errors;
      abs_errors.reserve(biases.size());
      for (double b : biases) abs_errors.push_back(std::abs(b));
      cell.median_abs_error = median(std::move(abs_errors));
      return cell;
    };
    table.push_back(summarize(Estimator::ols_direct, bias_ols));
    table.push_back(summarize(Estimator::two_stage, bias_two_stage));
  }
  return table;
}

}  // namespace transitfit
