#include "flnn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "flnn/error.hpp"

namespace flnn {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::string& section, const std::string& key) {
  return section + "." + key;
}

}  // namespace

IniConfig IniConfig::parse(const std::string& text) {
  IniConfig cfg;
  std::istringstream in(text);
  try {
    pt::read_ini(in, cfg.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

IniConfig IniConfig::load(const std::filesystem::path& path) {
  IniConfig cfg;
  try {
    pt::read_ini(path.string(), cfg.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

void IniConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  auto it = tree_.find(section);
  if (it == tree_.not_found()) {
    tree_.push_back({section, pt::ptree{}});
    it = tree_.find(section);
  }
  auto& child = tree_.to_iterator(it)->second;
  auto kit = child.find(key);
  if (kit == child.not_found()) {
    child.push_back({key, pt::ptree(value)});
  } else {
    kit->second.put_value(value);
  }
}

void IniConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not KEY=VALUE");
  }
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size()) {
    throw ConfigError("override key '" + lhs + "' must be section.key");
  }
  set(lhs.substr(0, dot), lhs.substr(dot + 1), trim(assignment.substr(eq + 1)));
}

bool IniConfig::has_section(const std::string& section) const {
  return tree_.find(section) != tree_.not_found();
}

std::vector<std::string> IniConfig::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, child] : tree_) out.push_back(name);
  return out;
}

std::optional<std::string> IniConfig::get(const std::string& section,
                                          const std::string& key) const {
  auto it = tree_.find(section);
  if (it == tree_.not_found()) return std::nullopt;
  auto kit = it->second.find(key);
  if (kit == it->second.not_found()) return std::nullopt;
  return trim(kit->second.data());
}

std::string IniConfig::require(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v || v->empty()) throw ConfigError("missing required setting " + where(section, key));
  return *v;
}

std::string IniConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) {
  if (auto v = get(section, key)) return *v;
  set(section, key, fallback);
  return fallback;
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) {
  auto v = get(section, key);
  if (!v) {
    std::ostringstream os;
    os.precision(17);
    os << fallback;
    set(section, key, os.str());
    return fallback;
  }
  if (*v == "inf" || *v == "+inf") return INFINITY;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(where(section, key) + " = '" + *v + "' is not a number");
  }
  return out;
}

std::uint64_t IniConfig::get_uint(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) {
  auto v = get(section, key);
  if (!v) {
    set(section, key, std::to_string(fallback));
    return fallback;
  }
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError(where(section, key) + " = '" + *v + "' is not a non-negative integer");
  }
  return out;
}

bool IniConfig::get_bool(const std::string& section, const std::string& key, bool fallback) {
  auto v = get(section, key);
  if (!v) {
    set(section, key, fallback ? "true" : "false");
    return fallback;
  }
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(where(section, key) + " = '" + *v + "' is not a boolean");
}

std::vector<std::string> IniConfig::get_list(const std::string& section, const std::string& key,
                                             const std::string& fallback) {
  const std::string raw = get_string(section, key, fallback);
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string IniConfig::dump() const {
  std::ostringstream os;
  pt::write_ini(os, tree_);
  return os.str();
}

DatasetSpec dataset_spec_from(IniConfig& ini, const std::string& name) {
  const std::string sec = "dataset." + name;
  if (!ini.has_section(sec)) throw ConfigError("dataset '" + name + "' has no [" + sec + "] section");
  DatasetSpec d;
  d.name = name;
  d.path = ini.require(sec, "path");
  if (d.path.is_relative()) d.path = ini.get_string("run", "data_dir", "data") / d.path;
  auto& s = d.schema;
  s.column_count = ini.get_uint(sec, "columns", 0);
  s.header = ini.get_bool(sec, "header", false);
  const std::string delim = ini.get_string(sec, "delimiter", ",");
  if (delim.size() != 1) throw ConfigError(sec + ".delimiter must be one character");
  s.delimiter = delim[0];
  s.missing_token = ini.get_string(sec, "missing_token", "?");
  for (const auto& c : ini.get_list(sec, "id_columns", "")) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
    if (ec != std::errc() || p != c.data() + c.size()) {
      throw ConfigError(sec + ".id_columns has a non-integer entry '" + c + "'");
    }
    s.id_columns.push_back(v);
  }
  if (!ini.get(sec, "target_column")) throw ConfigError("missing required setting " + sec + ".target_column");
  s.target_column = ini.get_uint(sec, "target_column", 0);
  s.positive_labels = ini.get_list(sec, "positive_labels", "");
  s.negative_labels = ini.get_list(sec, "negative_labels", "");
  if (s.positive_labels.empty() || s.negative_labels.empty()) {
    throw ConfigError(sec + " needs positive_labels and negative_labels");
  }
  const std::string missing = ini.get_string(sec, "missing_policy", "drop");
  if (missing == "drop") {
    d.missing = MissingPolicy::drop_rows;
  } else if (missing == "median") {
    d.missing = MissingPolicy::impute_median;
  } else {
    throw ConfigError(sec + ".missing_policy must be drop or median");
  }
  return d;
}

namespace {

void read_bp(IniConfig& ini, BpConfig& bp) {
  bp.learning_rate = ini.get_double("bp", "learning_rate", 0.3);
  bp.momentum = ini.get_double("bp", "momentum", 0.7);
  bp.max_epochs = ini.get_uint("bp", "max_epochs", 1000);
  bp.min_error = ini.get_double("bp", "min_error", 0.001);
  bp.init_low = ini.get_double("bp", "init_low", -1.0);
  bp.init_high = ini.get_double("bp", "init_high", 1.0);
  bp.online = ini.get_bool("bp", "online", false);
  const std::string backend = ini.get_string("bp", "backend", "openmp");
  if (backend == "openmp") {
    bp.backend = kernels::Backend::openmp;
  } else if (backend == "serial") {
    bp.backend = kernels::Backend::serial;
  } else {
    throw ConfigError("bp.backend must be openmp or serial");
  }
  bp.validate();
}

void read_abc(IniConfig& ini, AbcConfig& abc, double& lower, double& upper) {
  abc.colony_size = ini.get_uint("abc", "colony_size", 50);
  abc.max_cycles = ini.get_uint("abc", "max_cycles", 100);
  abc.min_error = ini.get_double("abc", "min_error", 0.001);
  abc.limit = ini.get_uint("abc", "limit", 0);
  abc.parallel_employed = ini.get_bool("abc", "parallel_employed", true);
  lower = ini.get_double("abc", "lower", -10.0);
  upper = ini.get_double("abc", "upper", 10.0);
  if (abc.colony_size < 2) throw ConfigError("abc.colony_size must be >= 2");
  if (!(lower < upper)) throw ConfigError("abc.lower must be below abc.upper");
  if (!(abc.min_error >= 0.0)) throw ConfigError("abc.min_error must be >= 0");
}

}  // namespace

RunConfig run_config_from(IniConfig& ini) {
  if (ini.empty()) throw ConfigError("configuration is empty");
  const auto names = ini.get_list("run", "datasets", "");
  if (names.empty()) throw ConfigError("run.datasets lists no datasets");
  RunConfig rc = trainer_config_from(ini);
  for (const auto& n : names) rc.datasets.push_back(dataset_spec_from(ini, n));
  rc.validate();
  return rc;
}

RunConfig trainer_config_from(IniConfig& ini) {
  if (ini.empty()) throw ConfigError("configuration is empty");
  RunConfig rc;
  rc.trainers.clear();
  for (const auto& t : ini.get_list("run", "trainers", "mlp_bp, flnn_bp, flnn_abc")) {
    auto id = parse_trainer(t);
    if (!id) throw ConfigError("unknown trainer '" + t + "'");
    rc.trainers.push_back(*id);
  }
  rc.trials = ini.get_uint("run", "trials", 10);
  rc.master_seed = ini.get_uint("run", "master_seed", rc.master_seed);
  rc.threads = static_cast<int>(ini.get_uint("run", "threads", 0));
  rc.output_dir = ini.get_string("run", "output_dir", "out");
  rc.flnn_order = ini.get_uint("network", "flnn_order", 2);
  rc.mlp_hidden = ini.get_uint("network", "mlp_hidden", 0);
  read_bp(ini, rc.bp);
  read_abc(ini, rc.abc, rc.abc_lower, rc.abc_upper);
  return rc;
}

TrainSettings train_settings_from(IniConfig& ini) {
  TrainSettings t;
  t.dataset = ini.require("train", "dataset");
  const std::string trainer = ini.get_string("train", "trainer", "flnn_abc");
  auto id = parse_trainer(trainer);
  if (!id) throw ConfigError("unknown trainer '" + trainer + "'");
  t.trainer = *id;
  const auto fold = ini.get_uint("train", "fold", 1);
  if (fold != 1 && fold != 2) throw ConfigError("train.fold must be 1 or 2");
  t.fold = static_cast<int>(fold);
  return t;
}

AbcDemoSettings abc_demo_settings_from(IniConfig& ini) {
  AbcDemoSettings s;
  s.function = ini.get_string("abc_demo", "function", "sphere");
  s.dimension = ini.get_uint("abc_demo", "dimension", 5);
  double lower = 0.0, upper = 0.0;
  read_abc(ini, s.abc, lower, upper);
  s.abc.min_error = ini.get_double("abc_demo", "min_error", 0.0);
  s.abc.max_cycles = ini.get_uint("abc_demo", "max_cycles", s.abc.max_cycles);
  if (s.dimension < 1) throw ConfigError("abc_demo.dimension must be >= 1");
  s.abc.bounds = Bounds::uniform(s.dimension, lower, upper);
  return s;
}

}  // namespace flnn
