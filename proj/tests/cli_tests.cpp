// Drives the installed CLI end to end through a shell, checking exit codes,
// produced files and report contents.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "transitfit/synth.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWorkRoot = fs::temp_directory_path() / "transitfit_cli_tests";

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TRANSITFIT_CLI_PATH + "\" " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = kWorkRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_tiny_dataset(const fs::path& dir) {
  const fs::path path = dir / "tiny.csv";
  std::ofstream out(path);
  out << "agency_id,year,vrh,tupt,voms,passenger_miles,vrm,avg_trip_length,"
         "service_area_population,service_area_sq_miles,total_operating_cost,total_fares\n"
      << "A1,2002,100,2000,5,9000,1200,4.5,50000,25,30000,8000\n"
      << "A2,2002,150,3000,6,9500,1300,3.1,60000,20,45000,9000\n"
      << "A1,2003,110,2100,5,9100,1250,4.3,50000,25,32000,8200\n";
  return path;
}

const std::string kShippedDataset = std::string(TRANSITFIT_DATA_DIR) + "/synthetic_ntd.csv";
const std::string kShippedSeeds = std::string(TRANSITFIT_DATA_DIR) + "/acceptance_seeds.txt";

}  // namespace

TEST_CASE("describe writes the nine metric tables plus summary and exclusions") {
  const fs::path dir = fresh_dir("describe");
  const fs::path input = write_tiny_dataset(dir);
  const fs::path out = dir / "out";
  CHECK(run_cli("describe --input \"" + input.string() + "\" --out \"" + out.string() + "\"") ==
        0);
  for (const char* metric : {"vrh", "tupt", "avg_trip_length", "voms", "passenger_miles", "sad",
                             "acpt", "afpt", "vrm"}) {
    CHECK(fs::exists(out / "descriptive" / (std::string(metric) + ".csv")));
  }
  CHECK(fs::exists(out / "descriptive" / "summary.csv"));
  CHECK(fs::exists(out / "exclusions.csv"));

  const std::string vrh = read_file(out / "descriptive" / "vrh.csv");
  CHECK(vrh == "year,mean,n\n2002,125,2\n2003,110,1\n");
  const std::string exclusions = read_file(out / "exclusions.csv");
  CHECK(exclusions.rfind("rule,count\n", 0) == 0);
  CHECK(exclusions.find("parse.rows_in,3") != std::string::npos);
}

TEST_CASE("fit-2sls on the shipped dataset reports two significant stages") {
  const fs::path out = fresh_dir("fit2sls") / "out";
  CHECK(run_cli("fit-2sls --input \"" + kShippedDataset + "\" --out \"" + out.string() + "\"") ==
        0);
  const std::string supply = read_file(out / "supply.report");
  const std::string demand = read_file(out / "demand.report");
  CHECK(supply.find("ACPT") != std::string::npos);
  CHECK(supply.find("Not significant") == std::string::npos);
  CHECK(demand.find("EVRH") != std::string::npos);
  CHECK(demand.find("AFPT") != std::string::npos);
  CHECK(demand.find("Not significant") == std::string::npos);
  CHECK(demand.find("se_mode=naive") != std::string::npos);
  CHECK(fs::exists(out / "exclusions.csv"));
}

TEST_CASE("fit-demand writes only the demand report; corrected se mode is accepted") {
  const fs::path out = fresh_dir("fitdemand") / "out";
  CHECK(run_cli("fit-demand --input \"" + kShippedDataset + "\" --se-mode corrected --out \"" +
                out.string() + "\"") == 0);
  CHECK(fs::exists(out / "demand.report"));
  CHECK_FALSE(fs::exists(out / "supply.report"));
  CHECK(read_file(out / "demand.report").find("se_mode=corrected") != std::string::npos);
}

TEST_CASE("fit-supply honors response/regressor overrides and the student-t mode") {
  const fs::path out = fresh_dir("fitsupply") / "out";
  CHECK(run_cli("fit-supply --input \"" + kShippedDataset +
                "\" --response vrm --regressors voms,sad --student-t --out \"" + out.string() +
                "\"") == 0);
  const std::string report = read_file(out / "supply.report");
  CHECK(report.find("response=vrm") != std::string::npos);
  CHECK(report.find("AVOMS") != std::string::npos);
  CHECK(report.find("coef.sad.") != std::string::npos);
  CHECK(report.find("coef.acpt.") == std::string::npos);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run_cli("fit-2sls --no-such-flag") != 0);
  CHECK(run_cli("") != 0);
  CHECK(run_cli("describe") != 0);  // --input required
}

TEST_CASE("missing input writes a machine-readable error record") {
  const fs::path out = fresh_dir("ioerror") / "out";
  CHECK(run_cli("describe --input /no/such/file.csv --out \"" + out.string() + "\"") == 1);
  const std::string record = read_file(out / "error.report");
  CHECK(record.find("command=describe") != std::string::npos);
  CHECK(record.find("error_kind=io") != std::string::npos);
}

TEST_CASE("collinear supply regressors fail with a named stage") {
  const fs::path dir = fresh_dir("collinear");
  const fs::path input = dir / "collinear.csv";
  {
    std::ofstream out(input);
    out << "agency_id,year,vrh,tupt,voms,service_area_population,service_area_sq_miles,"
           "total_operating_cost,total_fares\n";
    // tupt = 1 and area = 1 make acpt = cost and sad = population; setting
    // population = cost duplicates the two columns.
    for (int i = 0; i < 8; ++i) {
      const double cost = 10.0 + i;
      out << "A" << i << ",2002," << (50 + 3 * i) << ",1," << (2 + i) << "," << cost << ",1,"
          << cost << ",5\n";
    }
  }
  const fs::path out = dir / "out";
  CHECK(run_cli("fit-2sls --input \"" + input.string() + "\" --out \"" + out.string() + "\"") ==
        1);
  const std::string record = read_file(out / "error.report");
  CHECK(record.find("error_kind=collinearity") != std::string::npos);
  CHECK(record.find("stage=supply") != std::string::npos);
}

TEST_CASE("schema flag remaps vintage headers") {
  const fs::path dir = fresh_dir("schema");
  const fs::path input = dir / "vintage.csv";
  {
    std::ofstream out(input);
    out << "NTD ID,Report Year,Annual VRH\nA1,2002,123\nA2,2003,140\n";
  }
  const fs::path map = dir / "schema.kv";
  {
    std::ofstream out(map);
    out << "# vintage export\nagency_id=NTD ID\nyear=Report Year\nvrh=Annual VRH\n";
  }
  const fs::path out = dir / "out";
  CHECK(run_cli("describe --input \"" + input.string() + "\" --schema \"" + map.string() +
                "\" --out \"" + out.string() + "\"") == 0);
  CHECK(read_file(out / "descriptive" / "vrh.csv").find("2002,123,1") != std::string::npos);
}

TEST_CASE("synth output feeds straight back into fit-2sls") {
  const fs::path dir = fresh_dir("synth");
  const fs::path synth_out = dir / "gen";
  CHECK(run_cli("synth --seed 11 --n-agencies 150 --n-years 2 --rho 0.5 --out \"" +
                synth_out.string() + "\"") == 0);
  CHECK(fs::exists(synth_out / "synthetic.csv"));
  const std::string truth = read_file(synth_out / "ground_truth.txt");
  CHECK(truth.find("seed=11") != std::string::npos);
  CHECK(truth.find("demand.slope.evrh=0.98") != std::string::npos);

  const fs::path fit_out = dir / "fit";
  CHECK(run_cli("fit-2sls --input \"" + (synth_out / "synthetic.csv").string() + "\" --out \"" +
                fit_out.string() + "\"") == 0);
  CHECK(fs::exists(fit_out / "supply.report"));
}

TEST_CASE("validate with reduced settings passes and writes the report") {
  const fs::path out = fresh_dir("validate") / "out";
  CHECK(run_cli("validate --seeds \"" + kShippedSeeds +
                "\" --replications 20 --sizes 2000,10000 --out \"" + out.string() + "\"") == 0);
  const std::string report = read_file(out / "validate.report");
  CHECK(report.find("Verdict: PASS") != std::string::npos);
  CHECK(report.find("bias.two-stage.10000.mean=") != std::string::npos);
}

TEST_CASE("log policy none is honored") {
  const fs::path out = fresh_dir("lognone") / "out";
  CHECK(run_cli("fit-supply --input \"" + kShippedDataset + "\" --log none --out \"" +
                out.string() + "\"") == 0);
  // raw-scale fit still estimable; report exists with the same layout
  CHECK(read_file(out / "supply.report").find("Parameter") != std::string::npos);
}

TEST_CASE("shipped seed list equals the default validate derivation") {
  // validate without --seeds derives from master seed 424242; the committed
  // list must stay in sync so the two paths are interchangeable.
  const auto shipped = transitfit::load_seed_list(kShippedSeeds);
  const auto derived = transitfit::derive_seeds(424242, 200);
  CHECK(shipped == derived);
}
