#include <gtest/gtest.h>

#include "flnn/config.hpp"
#include "flnn/error.hpp"

using namespace flnn;

TEST(IniConfig, OverridesSplitAtLastDot) {
  auto ini = IniConfig::parse("[dataset.cancer]\npath = a.data\n");
  ini.set("dataset.cancer.path=b.data");
  ini.set("bp.learning_rate = 0.1");
  EXPECT_EQ(*ini.get("dataset.cancer", "path"), "b.data");
  EXPECT_EQ(ini.get_double("bp", "learning_rate", 0.3), 0.1);
  EXPECT_THROW(ini.set("nodot=1"), ConfigError);
  EXPECT_THROW(ini.set("bp.momentum"), ConfigError);
}

TEST(IniConfig, DefaultsAreEchoed) {
  auto ini = IniConfig::parse("[run]\ndatasets = x\n");
  EXPECT_EQ(ini.get_uint("run", "trials", 10), 10u);
  EXPECT_NE(ini.dump().find("trials=10"), std::string::npos);
  auto again = IniConfig::parse(ini.dump());
  EXPECT_EQ(again.get_uint("run", "trials", 3), 10u);
}

TEST(IniConfig, TypedErrors) {
  auto ini = IniConfig::parse("[bp]\nlearning_rate = fast\nonline = maybe\nmax_epochs = -3\n");
  EXPECT_THROW(ini.get_double("bp", "learning_rate", 0.3), ConfigError);
  EXPECT_THROW(ini.get_bool("bp", "online", false), ConfigError);
  EXPECT_THROW(ini.get_uint("bp", "max_epochs", 1), ConfigError);
}

TEST(RunConfig, ShippedDefaults) {
  auto ini = IniConfig::load(FLNN_SOURCE_DIR "/configs/benchmark.ini");
  const auto rc = run_config_from(ini);
  ASSERT_EQ(rc.datasets.size(), 3u);
  EXPECT_EQ(rc.trainers.size(), 3u);
  EXPECT_EQ(rc.trials, 10u);
  EXPECT_EQ(rc.bp.learning_rate, 0.3);
  EXPECT_EQ(rc.bp.momentum, 0.7);
  EXPECT_EQ(rc.bp.max_epochs, 1000u);
  EXPECT_EQ(rc.bp.min_error, 0.001);
  EXPECT_EQ(rc.bp.init_low, -1.0);
  EXPECT_EQ(rc.bp.init_high, 1.0);
  EXPECT_FALSE(rc.bp.online);
  EXPECT_EQ(rc.abc.max_cycles, 100u);
  EXPECT_EQ(rc.abc.min_error, 0.001);
  EXPECT_EQ(rc.abc_lower, -10.0);
  EXPECT_EQ(rc.abc_upper, 10.0);
  EXPECT_EQ(rc.abc.colony_size, 50u);
  EXPECT_EQ(rc.flnn_order, 2u);
  EXPECT_EQ(rc.datasets[0].schema.id_columns, std::vector<std::size_t>{0});
  EXPECT_EQ(rc.datasets[0].path, std::filesystem::path("data") / "breast-cancer-wisconsin.data");
}

TEST(RunConfig, RejectsEmptyAndUnknown) {
  IniConfig empty = IniConfig::parse("");
  EXPECT_THROW(run_config_from(empty), ConfigError);
  auto bad = IniConfig::parse("[run]\ndatasets = x\n[dataset.x]\npath=p\ntarget_column=1\n"
                              "positive_labels=1\nnegative_labels=0\n[bp]\n");
  bad.set("run.trainers=nope");
  EXPECT_THROW(run_config_from(bad), ConfigError);
  auto nolabels = IniConfig::parse("[run]\ndatasets = x\n[dataset.x]\npath=p\ntarget_column=1\n");
  EXPECT_THROW(run_config_from(nolabels), ConfigError);
}

TEST(AbcDemoSettings, FromConfig) {
  auto ini = IniConfig::parse("[abc_demo]\nfunction = rastrigin\ndimension = 2\n[abc]\nlower=-5.12\nupper=5.12\n");
  const auto s = abc_demo_settings_from(ini);
  EXPECT_EQ(s.function, "rastrigin");
  EXPECT_EQ(s.abc.dim(), 2u);
  EXPECT_EQ(s.abc.bounds.upper[1], 5.12);
  ini.set("abc_demo.dimension=0");
  EXPECT_THROW(abc_demo_settings_from(ini), ConfigError);
}
