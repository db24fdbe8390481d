#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "transitfit/csv.hpp"
#include "transitfit/descriptive.hpp"
#include "transitfit/errors.hpp"
#include "transitfit/frame.hpp"
#include "transitfit/ingest.hpp"
#include "transitfit/ols.hpp"
#include "transitfit/report.hpp"
#include "transitfit/synth.hpp"
#include "transitfit/tsls.hpp"
#include "transitfit/types.hpp"

namespace fs = std::filesystem;
using namespace transitfit;

namespace {

constexpr std::uint64_t kDefaultMasterSeed = 424242;
constexpr int kDefaultReplications = 200;

struct CommonOptions {
  std::string input;
  std::string schema_path;
  std::string out_dir = "out";
  char delimiter = ',';
  int min_year = 2002;
  int max_year = 2018;

  std::string response;
  std::string regressors;
  std::string log_policy = "all";
  double critical_intercept = 1.96;
  double critical_slope = 1.65;
  bool student_t = false;
  std::string se_mode = "naive";
  std::uint64_t seed = kDefaultMasterSeed;
};

void add_io_flags(CLI::App& cmd, CommonOptions& opt, bool input_required) {
  auto* in = cmd.add_option("--input", opt.input, "input dataset (delimited text)");
  if (input_required) in->required();
  cmd.add_option("--schema", opt.schema_path, "schema map file (logical=header lines)");
  cmd.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  cmd.add_option("--delimiter", opt.delimiter, "field delimiter")->capture_default_str();
  cmd.add_option("--min-year", opt.min_year, "lowest accepted year")->capture_default_str();
  cmd.add_option("--max-year", opt.max_year, "highest accepted year")->capture_default_str();
}

void add_spec_flags(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--response", opt.response, "response variable override");
  cmd.add_option("--regressors", opt.regressors, "comma-separated regressor override");
  cmd.add_option("--log", opt.log_policy, "log transform policy: all, none, or a variable list")
      ->capture_default_str();
  cmd.add_option("--critical-intercept", opt.critical_intercept,
                 "critical t value for the intercept")
      ->capture_default_str();
  cmd.add_option("--critical-slope", opt.critical_slope, "critical t value for slopes")
      ->capture_default_str();
  cmd.add_flag("--student-t", opt.student_t,
               "derive critical values from the exact t quantile at n-k dof");
}

Schema load_schema(const CommonOptions& opt) {
  return opt.schema_path.empty() ? Schema() : Schema::load(opt.schema_path);
}

ParseOptions parse_options(const CommonOptions& opt) {
  ParseOptions po;
  po.delimiter = opt.delimiter;
  po.min_year = opt.min_year;
  po.max_year = opt.max_year;
  return po;
}

InferenceSpec inference_from(const CommonOptions& opt) {
  InferenceSpec spec;
  spec.mode = opt.student_t ? InferenceSpec::CriticalMode::student_t
                            : InferenceSpec::CriticalMode::fixed;
  spec.critical_intercept = opt.critical_intercept;
  spec.critical_slope = opt.critical_slope;
  return spec;
}

std::vector<Field> parse_field_list(const std::string& text, bool allow_fitted_supply) {
  std::vector<Field> fields;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto b = name.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = name.find_last_not_of(" \t");
    const std::string token = name.substr(b, e - b + 1);
    if (allow_fitted_supply && token == kFittedSupplyName) continue;  // always enters first
    auto f = field_from_name(token);
    if (!f) throw SchemaError("unknown variable: " + token);
    fields.push_back(*f);
  }
  if (fields.empty()) throw SchemaError("no variables in list: " + text);
  return fields;
}

StageSpec supply_spec_from(const CommonOptions& opt) {
  StageSpec spec = StageSpec::supply_defaults();
  spec.log = LogPolicy::parse(opt.log_policy);
  spec.inference = inference_from(opt);
  return spec;
}

// For two-stage commands --response/--regressors configure the demand
// stage; the supply stage stays at its defaults.
StageSpec demand_spec_from(const CommonOptions& opt) {
  StageSpec spec = StageSpec::demand_defaults();
  if (!opt.response.empty()) {
    auto f = field_from_name(opt.response);
    if (!f) throw SchemaError("unknown response variable: " + opt.response);
    spec.response = *f;
  }
  if (!opt.regressors.empty()) spec.regressors = parse_field_list(opt.regressors, true);
  spec.log = LogPolicy::parse(opt.log_policy);
  spec.inference = inference_from(opt);
  spec.validate();
  return spec;
}

std::pair<Dataset, ExclusionReport> load_dataset(const CommonOptions& opt) {
  ParseResult parsed = parse_dataset_file(opt.input, load_schema(opt), parse_options(opt));
  return {derive_all(parsed.records), std::move(parsed.report)};
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

template <typename Fn>
std::string render_to_string(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

int run_describe(const CommonOptions& opt) {
  auto [records, report] = load_dataset(opt);
  const fs::path out_dir(opt.out_dir);
  for (Field metric : describe_metrics()) {
    const YearlySeries series = yearly_mean(records, metric);
    write_file(out_dir / "descriptive" / (std::string(field_key(metric)) + ".csv"),
               render_to_string([&](std::ostream& os) { render_yearly_csv(os, series); }));
  }
  write_file(out_dir / "descriptive" / "summary.csv", render_to_string([&](std::ostream& os) {
               render_summary_csv(os, summary_table(records));
             }));
  write_file(out_dir / "exclusions.csv", render_to_string([&](std::ostream& os) {
               render_exclusions_csv(os, {{"parse", &report}});
             }));
  std::cout << "describe: " << records.size() << " records, reports under " << opt.out_dir
            << "\n";
  return 0;
}

int run_fit_supply(const CommonOptions& opt) {
  auto [records, parse_report] = load_dataset(opt);
  StageSpec spec = supply_spec_from(opt);
  if (!opt.response.empty()) {
    auto f = field_from_name(opt.response);
    if (!f) throw SchemaError("unknown response variable: " + opt.response);
    spec.response = *f;
  }
  if (!opt.regressors.empty()) spec.regressors = parse_field_list(opt.regressors, false);
  spec.validate();

  const StageFit stage = fit_supply(records, spec);
  const fs::path out_dir(opt.out_dir);
  write_file(out_dir / "supply.report", render_to_string([&](std::ostream& os) {
               render_fit_report(os, "Supply", stage.fit);
             }));
  write_file(out_dir / "exclusions.csv", render_to_string([&](std::ostream& os) {
               render_exclusions_csv(
                   os, {{"parse", &parse_report}, {"supply", &stage.exclusions}});
             }));
  std::cout << "fit-supply: n = " << stage.fit.diagnostics.n << ", reports under " << opt.out_dir
            << "\n";
  return 0;
}

int run_two_stage(const CommonOptions& opt, bool write_supply, bool write_demand) {
  auto [records, parse_report] = load_dataset(opt);
  const StageSpec supply_spec = supply_spec_from(opt);
  const StageSpec demand_spec = demand_spec_from(opt);
  const TwoStageResult result =
      fit_two_stage(records, supply_spec, demand_spec, se_mode_from_name(opt.se_mode));

  const fs::path out_dir(opt.out_dir);
  if (write_supply) {
    write_file(out_dir / "supply.report", render_to_string([&](std::ostream& os) {
                 render_two_stage_supply_report(os, result);
               }));
  }
  if (write_demand) {
    write_file(out_dir / "demand.report", render_to_string([&](std::ostream& os) {
                 render_two_stage_demand_report(os, result);
               }));
  }
  write_file(out_dir / "exclusions.csv", render_to_string([&](std::ostream& os) {
               render_exclusions_csv(os, {{"parse", &parse_report},
                                          {"supply", &result.supply.exclusions},
                                          {"demand", &result.demand.exclusions}});
             }));
  std::cout << (write_supply ? "fit-2sls" : "fit-demand")
            << ": supply n = " << result.supply.fit.diagnostics.n
            << ", demand n = " << result.demand.fit.diagnostics.n << ", reports under "
            << opt.out_dir << "\n";
  return 0;
}

struct SynthOptions {
  int n_agencies = 606;
  int n_years = 17;
  double rho = 0.0;
  double sigma_supply = 0.35;
  double sigma_demand = 0.50;
  bool noiseless = false;
};

int run_synth(const CommonOptions& opt, const SynthOptions& synth_opt) {
  SynthConfig config;
  config.seed = opt.seed;
  config.n_agencies = synth_opt.n_agencies;
  config.n_years = synth_opt.n_years;
  config.rho = synth_opt.rho;
  config.sigma_supply = synth_opt.noiseless ? 0.0 : synth_opt.sigma_supply;
  config.sigma_demand = synth_opt.noiseless ? 0.0 : synth_opt.sigma_demand;

  const SynthResult result = generate(config);
  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  write_dataset_file((out_dir / "synthetic.csv").string(), result.records, Schema(),
                     opt.delimiter);
  write_file(out_dir / "ground_truth.txt",
             render_to_string([&](std::ostream& os) { write_ground_truth(os, config); }));
  std::cout << "synth: " << result.records.size() << " records under " << opt.out_dir << "\n";
  return 0;
}

struct ValidateOptions {
  std::string seeds_path;
  int replications = kDefaultReplications;
  std::string sizes = "500,2000,10000";
  double rho = 0.8;
};

int run_validate(const CommonOptions& opt, const ValidateOptions& val_opt) {
  if (val_opt.replications < 1) throw ConfigError("need at least one replication");
  std::vector<std::uint64_t> seeds =
      val_opt.seeds_path.empty()
          ? derive_seeds(opt.seed, static_cast<std::size_t>(val_opt.replications))
          : load_seed_list(val_opt.seeds_path);
  if (seeds.size() > static_cast<std::size_t>(val_opt.replications))
    seeds.resize(static_cast<std::size_t>(val_opt.replications));

  std::vector<int> sizes;
  {
    std::stringstream ss(val_opt.sizes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.find_first_not_of(" \t") == std::string::npos) continue;
      auto n = csv::parse_long(tok);
      if (!n || *n < 1) throw ConfigError("bad sample size: " + tok);
      sizes.push_back(static_cast<int>(*n));
    }
  }
  if (sizes.empty()) throw ConfigError("no sample sizes given");

  SynthConfig config;
  config.rho = val_opt.rho;

  const std::vector<BiasCell> table = bias_experiment(config, sizes, seeds);
  auto cell_of = [&](Estimator est, int n) -> const BiasCell& {
    for (const auto& cell : table) {
      if (cell.estimator == est && cell.sample_size == n) return cell;
    }
    throw ConfigError("missing bias cell");
  };

  const int n_max = *std::max_element(sizes.begin(), sizes.end());
  const BiasCell& two_stage = cell_of(Estimator::two_stage, n_max);
  const BiasCell& ols = cell_of(Estimator::ols_direct, n_max);

  std::vector<ValidateCheck> checks;
  auto add_check = [&](std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), std::move(detail), passed});
  };
  add_check("two_stage_bias_below_0.05", std::abs(two_stage.mean_bias) < 0.05,
            "mean bias " + format_human(two_stage.mean_bias) + " at n=" + std::to_string(n_max));
  add_check("ols_direct_bias_above_0.10", std::abs(ols.mean_bias) > 0.10,
            "mean bias " + format_human(ols.mean_bias) + " at n=" + std::to_string(n_max));
  bool beats_everywhere = true;
  for (int n : sizes) {
    beats_everywhere = beats_everywhere &&
                       std::abs(cell_of(Estimator::two_stage, n).mean_bias) <
                           std::abs(cell_of(Estimator::ols_direct, n).mean_bias);
  }
  add_check("two_stage_beats_ols_direct_every_n", beats_everywhere, "");
  bool monotone = true;
  std::vector<int> sorted_sizes = sizes;
  std::sort(sorted_sizes.begin(), sorted_sizes.end());
  for (std::size_t i = 1; i < sorted_sizes.size(); ++i) {
    monotone = monotone &&
               cell_of(Estimator::two_stage, sorted_sizes[i]).median_abs_error <=
                   cell_of(Estimator::two_stage, sorted_sizes[i - 1]).median_abs_error;
  }
  add_check("two_stage_median_abs_error_monotone", monotone, "");

  bool all_passed = true;
  for (const auto& check : checks) all_passed = all_passed && check.passed;

  write_file(fs::path(opt.out_dir) / "validate.report", render_to_string([&](std::ostream& os) {
               render_validate_report(os, table, checks, all_passed);
             }));
  std::cout << "validate: " << (all_passed ? "PASS" : "FAIL") << ", report under " << opt.out_dir
            << "\n";
  return all_passed ? 0 : 1;
}

void write_error_record(const std::string& out_dir, const std::string& command,
                        const Error& error) {
  try {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "error.report", std::ios::binary);
    out << "command=" << command << '\n';
    out << "error_kind=" << error.kind() << '\n';
    if (const auto* stage = dynamic_cast<const StageError*>(&error))
      out << "stage=" << stage->stage() << '\n';
    if (const auto* collinear = dynamic_cast<const CollinearityError*>(&error))
      out << "column=" << collinear->column() << '\n';
    out << "message=" << error.what() << '\n';
  } catch (...) {
    // stderr already carries the diagnostic
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transit supply and demand estimation (two-stage least squares)"};
  app.require_subcommand(1);

  CommonOptions opt;
  SynthOptions synth_opt;
  ValidateOptions val_opt;

  auto* describe = app.add_subcommand("describe", "yearly means and summary statistics");
  add_io_flags(*describe, opt, true);

  auto* fit_supply_cmd = app.add_subcommand("fit-supply", "estimate the supply equation");
  add_io_flags(*fit_supply_cmd, opt, true);
  add_spec_flags(*fit_supply_cmd, opt);

  auto* fit_demand_cmd =
      app.add_subcommand("fit-demand", "estimate the demand equation (runs both stages)");
  add_io_flags(*fit_demand_cmd, opt, true);
  add_spec_flags(*fit_demand_cmd, opt);
  fit_demand_cmd->add_option("--se-mode", opt.se_mode, "naive or corrected standard errors")
      ->capture_default_str();

  auto* fit_2sls_cmd = app.add_subcommand("fit-2sls", "full two-stage pipeline");
  add_io_flags(*fit_2sls_cmd, opt, true);
  add_spec_flags(*fit_2sls_cmd, opt);
  fit_2sls_cmd->add_option("--se-mode", opt.se_mode, "naive or corrected standard errors")
      ->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset with ground truth");
  synth_cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  synth_cmd->add_option("--seed", opt.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--delimiter", opt.delimiter, "field delimiter")->capture_default_str();
  synth_cmd->add_option("--n-agencies", synth_opt.n_agencies, "agencies per year")
      ->capture_default_str();
  synth_cmd->add_option("--n-years", synth_opt.n_years, "years per agency")
      ->capture_default_str();
  synth_cmd->add_option("--rho", synth_opt.rho, "disturbance correlation in [-1, 1]")
      ->capture_default_str();
  synth_cmd->add_option("--sigma-supply", synth_opt.sigma_supply, "supply noise sd")
      ->capture_default_str();
  synth_cmd->add_option("--sigma-demand", synth_opt.sigma_demand, "demand noise sd")
      ->capture_default_str();
  synth_cmd->add_flag("--noiseless", synth_opt.noiseless, "set both noise sds to zero");

  auto* validate_cmd =
      app.add_subcommand("validate", "Monte Carlo bias experiment against known ground truth");
  validate_cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  validate_cmd->add_option("--seed", opt.seed, "master seed when --seeds is not given")
      ->capture_default_str();
  validate_cmd->add_option("--seeds", val_opt.seeds_path, "file with one seed per line");
  validate_cmd->add_option("--replications", val_opt.replications, "replications per sample size")
      ->capture_default_str();
  validate_cmd->add_option("--sizes", val_opt.sizes, "comma-separated sample sizes")
      ->capture_default_str();
  validate_cmd->add_option("--rho", val_opt.rho, "disturbance correlation")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (describe->parsed()) return run_describe(opt);
    if (fit_supply_cmd->parsed()) return run_fit_supply(opt);
    if (fit_demand_cmd->parsed()) return run_two_stage(opt, false, true);
    if (fit_2sls_cmd->parsed()) return run_two_stage(opt, true, true);
    if (synth_cmd->parsed()) return run_synth(opt, synth_opt);
    if (validate_cmd->parsed()) return run_validate(opt, val_opt);
  } catch (const Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    write_error_record(opt.out_dir, command, e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
