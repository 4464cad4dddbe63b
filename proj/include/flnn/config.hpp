#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "flnn/bench.hpp"

namespace flnn {

/// Flat INI configuration: `[section]` headers and `key = value` lines.
/// Section names may contain dots (`[dataset.cancer]`); an override key
/// splits at its last dot, so `dataset.cancer.path=x` sets `path` in
/// `[dataset.cancer]`.
///
/// The typed getters record the default they fall back to, so dump() after
/// resolution yields the complete effective configuration.
class IniConfig {
 public:
  static IniConfig load(const std::filesystem::path& path);
  static IniConfig parse(const std::string& text);

  /// Applies one `section.key=value` override. Throws ConfigError if malformed.
  void set(std::string_view assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool empty() const { return tree_.empty(); }
  bool has_section(const std::string& section) const;
  std::vector<std::string> sections() const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  /// Throws ConfigError when the key is absent.
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback);
  std::uint64_t get_uint(const std::string& section, const std::string& key,
                         std::uint64_t fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                    const std::string& fallback);

  std::string dump() const;

 private:
  boost::property_tree::ptree tree_;
};

/// Network, trainer and run settings; leaves `datasets` empty.
RunConfig trainer_config_from(IniConfig& ini);

/// Builds the benchmark configuration. Relative dataset paths resolve
/// against `run.data_dir`. Throws ConfigError.
RunConfig run_config_from(IniConfig& ini);

/// Dataset section `[dataset.<name>]`.
DatasetSpec dataset_spec_from(IniConfig& ini, const std::string& name);

/// Single training run settings from `[train]`.
struct TrainSettings {
  std::string dataset;
  TrainerId trainer = TrainerId::flnn_abc;
  int fold = 1;  // 1: fold A trains, 2: fold B trains
};
TrainSettings train_settings_from(IniConfig& ini);

/// Test-function run settings from `[abc_demo]` plus `[abc]`.
struct AbcDemoSettings {
  std::string function = "sphere";
  std::size_t dimension = 5;
  AbcConfig abc;
};
AbcDemoSettings abc_demo_settings_from(IniConfig& ini);

}  // namespace flnn
