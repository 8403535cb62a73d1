#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "genspace/dumps.hpp"
#include "genspace/experiment.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result gsc(const std::string& args, const std::string& env = "") {
  const auto log = fs::temp_directory_path() / "genspace-test-cli.log";
  const auto cmd = env + " " GSC_BINARY " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = testutil::scratch("cli");
    const auto r = gsc("synth --out " + (root_ / "dens").string() + " -n 80 --height 8 --width 8 --seed 2");
    ASSERT_EQ(r.code, 0) << r.out;
  }
  static fs::path root_;
};
fs::path Cli::root_;

}  // namespace

TEST_F(Cli, IngestPrintsStats) {
  const auto r = gsc("ingest --corpus " + (root_ / "dens").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("80 levels, 8×8, 2 symbols"), std::string::npos) << r.out;
}

TEST_F(Cli, StagedPathEqualsRun) {
  const auto out = root_ / "run";
  const std::string common = " --corpus " + (root_ / "dens").string() + " --sample-size 50 --seed 3";
  auto r = gsc("run" + common + " --runs 2 --algorithms PCA,MCA -o " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const std::string algo : {"PCA", "MCA"}) {
    const auto p = root_ / ("stage_" + algo + ".csv"), b = root_ / ("stage_" + algo + "_bcs.csv");
    r = gsc("compress" + common + " --algorithm " + algo + " --run 1 --out " + p.string() + " --bc-out " + b.string());
    ASSERT_EQ(r.code, 0) << r.out;
    auto lower = algo;
    for (auto& c : lower) c = static_cast<char>(std::tolower(c));
    EXPECT_EQ(slurp(p), slurp(out / "projections" / ("synthetic_" + lower + "_run1.csv")));
    r = gsc("evaluate " + p.string() + " " + b.string());
    ASSERT_EQ(r.code, 0) << r.out;
    // every per-run rho/p pair from evaluate appears verbatim in the report
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    const auto report = slurp(out / "report.csv");
    int rows = 0;
    while (std::getline(lines, line)) {
      const auto f = genspace::split_csv_record(line);
      const auto expected = "synthetic," + f[0] + "," + f[1] + ",1," + f[2] + "," + f[3] + "\n";
      EXPECT_NE(report.find(expected), std::string::npos) << expected;
      ++rows;
    }
    EXPECT_EQ(rows, 3);
  }
}

TEST_F(Cli, OutputDirFromEnvironment) {
  const auto out = root_ / "envout";
  const auto r = gsc("run --corpus " + (root_ / "dens").string() + " --runs 1 --algorithms SVD --no-plots",
                     std::string(genspace::kOutputDirEnv) + "=" + out.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(out / "report.csv"));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = root_ / "cfg.json";
  std::ofstream(cfg) << R"({"corpus_path": ")" << (root_ / "dens").string()
                     << R"(", "algorithms": ["PCA"], "runs": 3, "write_plots": false, "output_dir": ")"
                     << (root_ / "cfgout").string() << "\"}";
  const auto r = gsc("run -c " + cfg.string() + " --runs 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto report = slurp(root_ / "cfgout" / "report.csv");
  EXPECT_NE(report.find(",0,"), std::string::npos);
  EXPECT_EQ(report.find("PCA,ES,1,"), std::string::npos);
}

TEST_F(Cli, PlotRendersAndRejectsEmpty) {
  const auto p = root_ / "plot.csv";
  ASSERT_EQ(gsc("compress --corpus " + (root_ / "dens").string() + " --out " + p.string()).code, 0);
  auto r = gsc("plot " + p.string() + " --out " + (root_ / "plot.svg").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(slurp(root_ / "plot.svg").find("class=\"marker\""), std::string::npos);
  std::ofstream(root_ / "empty.csv") << "level_id,set_label,x,y,algorithm,seed\n";
  r = gsc("plot " + (root_ / "empty.csv").string() + " --out " + (root_ / "e.svg").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("no rows"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(gsc("run --corpus /missing/corpus").code, 2);
  EXPECT_NE(gsc("run --corpus /missing/corpus").out.find("/missing/corpus"), std::string::npos);
  EXPECT_EQ(gsc("run --corpus " + (root_ / "dens").string() + " --runs 0").code, 1);
  EXPECT_EQ(gsc("run --corpus " + (root_ / "dens").string() + " --algorithms umap").code, 1);
  EXPECT_EQ(gsc("frobnicate").code, 1);
  EXPECT_EQ(gsc("--help").code, 0);
  // identical levels leave PCA with no variance
  const auto flat = root_ / "flat";
  fs::create_directories(flat);
  for (int k = 0; k < 5; ++k) std::ofstream(flat / (std::to_string(k) + ".txt")) << "..\n##\n";
  EXPECT_EQ(gsc("run --corpus " + flat.string() + " --algorithms PCA -o " + (root_ / "flatout").string()).code, 3);
}

TEST_F(Cli, SynthClusterMode) {
  const auto r = gsc("synth --mode cluster -n 20 --out " + (root_ / "clus").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(gsc("ingest --corpus " + (root_ / "clus").string()).out.find("20 levels, 12×12"), std::string::npos);
}
