#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reclab/synth_data.hpp"
#include "support/fixtures.hpp"

namespace reclab {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(RECLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("reclab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    f1_ = (dir_ / "f1.csv").string();
    save_csv(testing::f1(), f1_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string f1_;
};

TEST_F(CliTest, GenIsDeterministic) {
  const auto a = (dir_ / "a.csv").string();
  const auto b = (dir_ / "b.csv").string();
  const auto ra = run_cli("gen --users 50 --articles 12 --seed 3 -o " + a);
  ASSERT_EQ(ra.code, 0);
  EXPECT_NE(ra.out.find("missing ratio"), std::string::npos);
  ASSERT_EQ(run_cli("gen --users 50 --articles 12 --seed 3 -o " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto m = load_csv(a);
  EXPECT_EQ(m.n_users(), 50u);
  EXPECT_EQ(m.n_articles(), 12u);
}

TEST_F(CliTest, GenRejectsInvertedMissingRange) {
  EXPECT_EQ(run_cli("gen --missing-low 0.9 --missing-high 0.2 -o " + (dir_ / "x.csv").string()).code,
            2);
}

TEST_F(CliTest, ContentRecommendOnF1) {
  const auto r = run_cli("recommend -i " + f1_ + " --strategy content --txn 0,1,3,4");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("a2\t"), std::string::npos);
}

TEST_F(CliTest, ThresholdAtMaximumIsEmptyButSucceeds) {
  const auto r = run_cli("recommend -i " + f1_ + " --strategy threshold --theta 10.0 --txn 0,1,2,3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("empty result"), std::string::npos);
}

TEST_F(CliTest, DuplicateTransactionIsUsageError) {
  EXPECT_EQ(run_cli("recommend -i " + f1_ + " --strategy threshold --txn 0,0,1,2").code, 2);
  EXPECT_EQ(run_cli("recommend -i " + f1_ + " --strategy threshold --txn 0,1,2,9").code, 2);
}

TEST_F(CliTest, TooManyClustersIsUsageError) {
  const auto path = (dir_ / "small.csv").string();
  ASSERT_EQ(run_cli("gen --users 50 --articles 10 -o " + path).code, 0);
  EXPECT_EQ(run_cli("bench -i " + path + " --strategy kmeans --k 100").code, 2);
}

TEST_F(CliTest, BenchAllWritesReport) {
  const auto path = (dir_ / "data.csv").string();
  const auto report = (dir_ / "report.json").string();
  ASSERT_EQ(run_cli("gen --users 200 --articles 20 -o " + path).code, 0);
  const auto r = run_cli("bench -i " + path + " --all --k 10 --iterations 50 -o " + report);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Comparison of the strategies"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(report));
  ASSERT_EQ(doc["strategies"].size(), 3u);
  for (const auto& s : doc["strategies"]) EXPECT_EQ(s["histogram"]["total"], 50);
}

TEST_F(CliTest, BenchNeedsAStrategy) {
  EXPECT_EQ(run_cli("bench -i " + f1_).code, 2);
}

TEST_F(CliTest, MissingDatasetIsRuntimeFailure) {
  EXPECT_EQ(run_cli("bench -i " + (dir_ / "nope.csv").string() + " --strategy content").code, 1);
}

}  // namespace
}  // namespace reclab
