// flnn: command-line driver for training, evaluation, the benchmark protocol
// and ABC runs on standard test functions.
//
// Exit codes: 0 ok, 1 configuration error, 2 data error, 3 training error,
// 4 output I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flnn/abc.hpp"
#include "flnn/bench.hpp"
#include "flnn/config.hpp"
#include "flnn/error.hpp"
#include "flnn/test_functions.hpp"
#include "flnn/train_bp.hpp"

namespace fs = std::filesystem;
using namespace flnn;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kTraining = 3, kIo = 4 };

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool verbose = false;
  // evaluate
  std::string model;
  std::string scaler;
  std::string split = "test";
  // abc-demo
  std::string function;
  std::optional<std::size_t> dimension;
};

IniConfig load_config(const Options& o, bool required) {
  IniConfig ini;
  if (!o.config.empty()) {
    if (!fs::exists(o.config)) throw ConfigError("config file " + o.config + " does not exist");
    ini = IniConfig::load(o.config);
  } else if (required) {
    throw ConfigError("--config is required");
  }
  for (const auto& s : o.overrides) ini.set(s);
  if (o.seed) ini.set("run", "master_seed", std::to_string(*o.seed));
  return ini;
}

fs::path output_dir(const Options& o, IniConfig& ini, const std::string& fallback) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("FLNN_OUT_DIR"); env && *env) return env;
  return ini.get_string("run", "output_dir", fallback);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string history_csv(const char* header, const std::vector<double>& values, std::size_t first) {
  std::ostringstream os;
  os.precision(17);
  os << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) os << (first + i) << ',' << values[i] << '\n';
  return os.str();
}

// Dataset loaded and split the same way the benchmark does it.
struct FoldSplit {
  Dataset train, test;
  MinMaxScaler scaler;
};

FoldSplit load_fold(const DatasetSpec& spec, std::uint64_t master_seed, int fold) {
  auto raw = load_csv(spec.path, spec.schema);
  auto data = preprocess(raw, spec.schema, spec.missing, spec.name);
  const auto folds = two_fold_split(data.size(), split_seed(master_seed, spec.name));
  Dataset a = data.subset(folds.fold_a);
  Dataset b = data.subset(folds.fold_b);
  FoldSplit s{fold == 1 ? std::move(a) : std::move(b), fold == 1 ? std::move(b) : std::move(a), {}};
  s.scaler = MinMaxScaler::fit(s.train.features);
  return s;
}

void warn_constant_columns(const MinMaxScaler& scaler, const Options& o) {
  if (o.quiet) return;
  for (std::size_t c : scaler.constant_columns()) {
    std::cerr << "warning: feature column " << c << " is constant on the training fold; scaled to 0\n";
  }
}

int cmd_train(const Options& o) {
  IniConfig ini = load_config(o, true);
  RunConfig rc = trainer_config_from(ini);
  const TrainSettings ts = train_settings_from(ini);
  rc.datasets.push_back(dataset_spec_from(ini, ts.dataset));
  rc.validate();
  const fs::path out = output_dir(o, ini, "out/train");

  FoldSplit split = load_fold(rc.datasets.front(), rc.master_seed, ts.fold);
  warn_constant_columns(split.scaler, o);
  const Matrix train_x = split.scaler.transform(split.train.features);
  const Matrix test_x = split.scaler.transform(split.test.features);

  const Network net(network_for(ts.trainer, train_x.cols(), rc));
  const std::uint64_t seed = trial_seed(rc.master_seed, ts.dataset, ts.trainer, ts.fold, 0);
  ParamVector params;
  std::string history;
  if (ts.trainer == TrainerId::flnn_abc) {
    AbcConfig abc = rc.abc;
    abc.bounds = Bounds::uniform(net.param_count(), rc.abc_lower, rc.abc_upper);
    abc.seed = seed;
    auto r = train_abc(net, abc, train_x, split.train.targets);
    params = ParamVector(std::move(r.best_position));
    history = history_csv("cycle,best_objective", r.history, 0);
  } else {
    BpConfig bp = rc.bp;
    bp.seed = seed;
    auto r = train_bp(net, bp, train_x, split.train.targets);
    params = std::move(r.params);
    history = history_csv("epoch,mse", r.history, 1);
  }

  prepare_dir(out);
  save_params(params, out / "model.json");
  write_text(out / "scaler.json", split.scaler.to_json());
  write_text(out / "history.csv", history);
  write_text(out / "resolved_config.ini", ini.dump());

  std::cout << "dataset " << ts.dataset << "  trainer " << to_string(ts.trainer) << "  network "
            << net.structure() << "  params " << net.param_count() << '\n'
            << "train_mse " << fixed6(mse(net, params, train_x, split.train.targets))
            << "  train_accuracy_pct " << fixed6(accuracy(net, params, train_x, split.train.targets))
            << '\n'
            << "test_mse " << fixed6(mse(net, params, test_x, split.test.targets))
            << "  test_accuracy_pct " << fixed6(accuracy(net, params, test_x, split.test.targets))
            << '\n';
  if (!o.quiet) std::cerr << "wrote " << out.string() << "/{model.json,scaler.json,history.csv}\n";
  return kOk;
}

int cmd_evaluate(const Options& o) {
  IniConfig ini = load_config(o, true);
  RunConfig rc = trainer_config_from(ini);
  const TrainSettings ts = train_settings_from(ini);
  const DatasetSpec spec = dataset_spec_from(ini, ts.dataset);
  if (o.model.empty()) throw ConfigError("--model is required");
  if (o.split != "train" && o.split != "test" && o.split != "all") {
    throw ConfigError("--split must be train, test or all");
  }

  const ParamVector params = load_params(o.model);
  fs::path scaler_path = o.scaler.empty() ? fs::path(o.model).parent_path() / "scaler.json"
                                          : fs::path(o.scaler);
  std::ifstream sin(scaler_path);
  if (!sin) throw ConfigError("cannot read scaler " + scaler_path.string());
  std::stringstream ss;
  ss << sin.rdbuf();
  const MinMaxScaler scaler = MinMaxScaler::from_json(ss.str());

  FoldSplit split = load_fold(spec, rc.master_seed, ts.fold);
  Dataset eval;
  if (o.split == "train") {
    eval = std::move(split.train);
  } else if (o.split == "test") {
    eval = std::move(split.test);
  } else {
    auto raw = load_csv(spec.path, spec.schema);
    eval = preprocess(raw, spec.schema, spec.missing, spec.name);
  }
  const Matrix x = scaler.transform(eval.features);
  const Network net(network_for(ts.trainer, x.cols(), rc));
  net.check_params(params.span());
  std::cout << "split " << o.split << "  rows " << eval.size() << '\n'
            << "mse " << fixed6(mse(net, params, x, eval.targets)) << "  accuracy_pct "
            << fixed6(accuracy(net, params, x, eval.targets)) << '\n';
  return kOk;
}

int cmd_benchmark(const Options& o) {
  IniConfig ini = load_config(o, true);
  RunConfig rc = run_config_from(ini);
  const fs::path out = output_dir(o, ini, "out/benchmark");
  rc.output_dir = out;

  const auto datasets = load_datasets(rc);
  std::size_t done = 0;
  const std::size_t total =
      datasets.size() * rc.trainers.size() * 2 * rc.trials;
  auto progress = [&](const TrialReport& r) {
    ++done;
    if (!o.verbose) return;
    std::cerr << '[' << done << '/' << total << "] " << r.dataset << ' ' << to_string(r.trainer)
              << " fold " << r.fold << " trial " << r.trial << ' '
              << (r.ok ? "train_acc " + fixed6(r.metrics.train_accuracy) : "FAILED: " + r.error)
              << '\n';
  };
  const ProtocolReport report = run_protocol(rc, datasets, run_trial, progress);
  emit_reports(report, out);
  write_text(out / "resolved_config.ini", ini.dump());

  if (!o.quiet) std::cout << format_summary_table(report);
  for (const auto& s : report.summary) {
    if (!s.ok) {
      std::cerr << "error: " << s.dataset << '/' << to_string(s.trainer) << ": " << s.error << '\n';
      return kTraining;
    }
  }
  return kOk;
}

int cmd_abc_demo(const Options& o) {
  IniConfig ini = load_config(o, false);
  if (!o.function.empty()) ini.set("abc_demo", "function", o.function);
  if (o.dimension) ini.set("abc_demo", "dimension", std::to_string(*o.dimension));
  AbcDemoSettings s = abc_demo_settings_from(ini);
  s.abc.seed = ini.get_uint("run", "master_seed", 20120101);
  const auto fn = test_functions::by_name(s.function);
  if (!fn) throw ConfigError("unknown test function '" + s.function + "'");
  const fs::path out = output_dir(o, ini, "out/abc_demo");

  const AbcResult r = run_abc(*fn, s.abc);
  prepare_dir(out);
  write_text(out / "abc_trace.csv", history_csv("cycle,best_objective", r.history, 0));
  write_text(out / "resolved_config.ini", ini.dump());
  std::cout.precision(10);
  std::cout << s.function << " D=" << s.dimension << " cycles " << r.cycles() << " evaluations "
            << r.evaluations << " best " << r.best_objective << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FLNN / MLP training with backpropagation and artificial bee colony"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration file");
    sub->add_option("--out", o.out, "output directory (default: $FLNN_OUT_DIR or run.output_dir)");
    sub->add_option("--set", o.overrides, "override a setting, section.key=value (repeatable)");
    sub->add_option("--seed", o.seed, "master seed (overrides run.master_seed)");
    auto* q = sub->add_flag("--quiet,-q", o.quiet, "only print results");
    sub->add_flag("--verbose,-v", o.verbose, "report progress")->excludes(q);
  };

  auto* train = app.add_subcommand("train", "train one network on one fold");
  common(train);
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a saved model");
  common(evaluate);
  evaluate->add_option("--model", o.model, "model.json written by train")->required();
  evaluate->add_option("--scaler", o.scaler, "scaler.json (default: next to the model)");
  evaluate->add_option("--split", o.split, "train, test or all");
  auto* bench = app.add_subcommand("benchmark", "run the 2-fold comparison protocol");
  common(bench);
  auto* demo = app.add_subcommand("abc-demo", "run ABC on sphere, rosenbrock or rastrigin");
  common(demo);
  demo->add_option("--function", o.function, "sphere | rosenbrock | rastrigin");
  demo->add_option("--dim", o.dimension, "search dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*train) return cmd_train(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*bench) return cmd_benchmark(o);
    if (*demo) return cmd_abc_demo(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kTraining;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return kConfig;
}
