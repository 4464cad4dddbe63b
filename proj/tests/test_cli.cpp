#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FLNN_CLI_PATH) + " " + args + " 2>&1";
  Run r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kConfig = FLNN_SOURCE_DIR "/configs/benchmark.ini";
const std::string kData = std::string("--set run.data_dir=") + FLNN_DATA_DIR;

fs::path out_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("flnn_cli_" + name);
  fs::remove_all(p);
  return p;
}

bool have_data() { return fs::exists(fs::path(FLNN_DATA_DIR) / "breast-cancer-wisconsin.data"); }

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(Cli, TrainWritesModel) {
  if (!have_data()) GTEST_SKIP() << "data not fetched";
  const auto out = out_dir("train");
  const auto r = run("train --config " + kConfig + " " + kData + " --out " + out.string() +
                     " --set train.trainer=flnn_bp --set bp.max_epochs=20 -q");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("45-1"), std::string::npos);
  std::ifstream in(out / "model.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.size(), 46u);
  EXPECT_EQ(line_count(out / "history.csv"), 21u);

  const auto e = run("evaluate --config " + kConfig + " " + kData + " --set train.trainer=flnn_bp"
                     " --model " + (out / "model.json").string() + " --split test");
  EXPECT_EQ(e.code, 0) << e.out;
  EXPECT_NE(e.out.find("rows 341"), std::string::npos) << e.out;
}

TEST(Cli, ExitCodes) {
  auto r = run("train --config " + kConfig + " --set run.data_dir=/nonexistent -q");
  EXPECT_EQ(r.code, 2) << r.out;
  r = run("train --config " + kConfig + " --set train.trainer=perceptron -q");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("train");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("frobnicate");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("abc-demo --function nosuch");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("abc-demo --dim 0");
  EXPECT_EQ(r.code, 1) << r.out;

  const auto empty = out_dir("empty_cfg");
  fs::create_directories(empty);
  std::ofstream(empty / "empty.ini") << "";
  r = run("benchmark --config " + (empty / "empty.ini").string());
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST(Cli, AbcDemo) {
  const auto out = out_dir("demo");
  const auto r = run("abc-demo --function rastrigin --dim 2 --set abc.max_cycles=50 "
                     "--set abc.lower=-5.12 --set abc.upper=5.12 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto pos = r.out.find("best ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 5)), 0.0);
  EXPECT_EQ(line_count(out / "abc_trace.csv"), 52u);
}

TEST(Cli, BenchmarkOneTrial) {
  if (!have_data()) GTEST_SKIP() << "data not fetched";
  const auto out = out_dir("bench");
  const auto r = run("benchmark --config " + kConfig + " " + kData + " --out " + out.string() +
                     " --set run.trials=1 --set bp.max_epochs=50 --set abc.max_cycles=10 -q");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(line_count(out / "summary.csv"), 10u);
  EXPECT_EQ(line_count(out / "trials.csv"), 19u);
  EXPECT_EQ(line_count(out / "complexity.csv"), 7u);
  EXPECT_TRUE(fs::exists(out / "resolved_config.ini"));
}

TEST(Cli, OutDirFromEnvironment) {
  const auto out = out_dir("env");
  const std::string cmd = "FLNN_OUT_DIR=" + out.string() + " " + FLNN_CLI_PATH +
                          " abc-demo --set abc.max_cycles=3 -q > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(out / "abc_trace.csv"));
}
