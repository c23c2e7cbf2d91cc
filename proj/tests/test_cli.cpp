#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("rsk_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    ASSERT_EQ(run("fixture fig3a --out-dir " + path("fig3a")).code, 0);
    ASSERT_EQ(run("fixture linear --seed 4 --out-dir " + path("linear")).code, 0);
    ASSERT_EQ(run("fixture linear --seed 5 --units 6 --targets 6 --stimuli 40 --out-dir " + path("square")).code,
              0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  static CliRun run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(RSK_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static json run_json(const std::string& args) {
    const CliRun r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
  }

  static inline fs::path dir_;
};

TEST_F(Cli, SelfCompareIsZero) {
  const json d = run_json("compare --x " + path("linear/model.csv") + " --y " + path("linear/model.csv") +
                          " --metric soft");
  EXPECT_EQ(d["schema"], 1);
  EXPECT_TRUE(d.contains("version"));
  EXPECT_NEAR(d["results"][0]["value"].get<double>(), 0.0, 1e-9);
  EXPECT_EQ(d["results"][0]["metric"], "soft_matching_distance");
  EXPECT_TRUE(d["results"][0]["diagnostics"].contains("iterations"));
  EXPECT_TRUE(d["timing"].contains("total_seconds"));
}

TEST_F(Cli, ThreeNetworkSoftCorrelation) {
  const json d = run_json("compare --x " + path("fig3a/x.csv") + " --y " + path("fig3a/z.csv") +
                          " --metric soft-corr --preprocess unit-cols-uncentered");
  EXPECT_NEAR(d["results"][0]["value"].get<double>(), 0.5, 1e-9);
  EXPECT_EQ(d["results"][0]["preprocessing"], "unit_columns_uncentered");
}

TEST_F(Cli, OneToOneAndSoftReportedTogether) {
  const json d = run_json("compare --x " + path("square/model.csv") + " --y " + path("square/target.csv") +
                          " --metric one2one --metric soft");
  const double hard = d["results"][0]["value"];
  const double soft = d["results"][1]["value"];
  EXPECT_NEAR(hard, std::sqrt(6.0) * soft, 1e-8 * std::max(1.0, hard));
  EXPECT_NEAR(d["relations"]["sqrt_n_soft_distance"].get<double>(), hard, 1e-8);
}

TEST_F(Cli, SweepCsv) {
  const std::string csv = path("sweep.csv");
  run_json("sweep --x " + path("linear/model.csv") + " --alphas 0,0.5,1 --seed 2 --csv " + csv);
  std::ifstream f(csv);
  std::string header, line;
  std::getline(f, header);
  EXPECT_EQ(header, "alpha,mean,stddev");
  std::vector<std::string> rows;
  while (std::getline(f, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  const double first = std::stod(rows[0].substr(rows[0].find(',') + 1));
  EXPECT_NEAR(first, 1.0, 1e-9);
}

TEST_F(Cli, AxiomCheckReportsNoViolations) {
  const json d = run_json("axioms --metric soft --triples 20 --seed 1");
  EXPECT_EQ(d["result"]["triples"], 20);
  EXPECT_EQ(d["result"]["symmetry_failures"], 0);
  EXPECT_EQ(d["result"]["triangle_failures"], 0);
  EXPECT_EQ(d["result"]["identity_failures"], 0);
}

TEST_F(Cli, PredictivityOnNoiselessFixture) {
  const json d = run_json("predictivity --model " + path("linear/model.csv") + " --target " +
                          path("linear/target.csv") + " --seed 3");
  EXPECT_GE(d["result"]["mean_r"].get<double>(), 0.999);
}

TEST_F(Cli, DeterministicApartFromTiming) {
  const std::string args = "sweep --x " + path("square/model.csv") + " --samples 3 --seed 9";
  json a = run_json(args), b = run_json(args);
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(Cli, ErrorsAreJsonWithExitCodes) {
  CliRun r = run("compare --x " + path("fig3a/x.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "usage");

  r = run("compare --x " + path("fig3a/x.csv") + " --y " + path("linear/model.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "dimension");

  r = run("compare --x " + path("fig3a/x.csv") + " --y " + path("fig3a/y.csv") + " --metric cka");
  EXPECT_EQ(r.code, 2);

  r = run("compare --x " + path("missing.csv") + " --y " + path("fig3a/y.csv"));
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, OrientationIsNeverGuessed) {
  // 6×3 against its 3×6 transpose: a stimulus mismatch, not a silent transpose.
  std::ofstream(path("t.csv")) << "1,0,0,0,0,0\n0,1,0,0,0,0\n0,0,1,0,0,0\n";
  const CliRun r = run("compare --x " + path("fig3a/x.csv") + " --y " + path("t.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("stimulus count mismatch"), std::string::npos);
}

TEST_F(Cli, BatchRunsEveryPair) {
  std::ofstream(path("pairs.txt")) << "fig3a/x.csv,fig3a/z.csv\nfig3a/y.csv,fig3a/z.csv\n";
  const json d = run_json("batch --pairs " + path("pairs.txt") + " --metric soft-corr --preprocess unit-cols-uncentered");
  ASSERT_EQ(d["pairs"].size(), 2u);
  for (const json& p : d["pairs"]) EXPECT_NEAR(p["results"][0]["value"].get<double>(), 0.5, 1e-9);
}

}  // namespace
