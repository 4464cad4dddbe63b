#include "flnn/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "flnn/error.hpp"
#include "flnn/kernels.hpp"
#include "flnn/rng.hpp"

namespace flnn {

namespace {

constexpr TrainerId kAllTrainers[] = {TrainerId::mlp_bp, TrainerId::flnn_bp,
                                      TrainerId::flnn_abc};

// Parameter counts published for the reference benchmark architectures,
// keyed by structure string.
const std::map<std::string, std::size_t>& published_param_counts() {
  static const std::map<std::string, std::size_t> table{
      {"9-9-1", 100}, {"45-1", 46}, {"8-8-1", 83}, {"36-1", 37}, {"6-6-1", 49}, {"21-1", 22}};
  return table;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

bool is_bp(TrainerId t) { return t != TrainerId::flnn_abc; }

}  // namespace

std::string_view to_string(TrainerId t) {
  switch (t) {
    case TrainerId::mlp_bp:
      return "mlp_bp";
    case TrainerId::flnn_bp:
      return "flnn_bp";
    case TrainerId::flnn_abc:
      return "flnn_abc";
  }
  return "?";
}

std::optional<TrainerId> parse_trainer(std::string_view s) {
  for (TrainerId t : kAllTrainers) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  if (datasets.empty()) throw ConfigError("no datasets configured");
  if (trainers.empty()) throw ConfigError("no trainers configured");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (flnn_order < 1) throw ConfigError("flnn order must be >= 1");
  if (!(abc_lower < abc_upper)) throw ConfigError("abc bounds are degenerate");
  if (abc.colony_size < 2) throw ConfigError("abc colony_size must be >= 2");
  bp.validate();
  for (const auto& d : datasets) {
    if (d.name.empty()) throw ConfigError("dataset without a name");
    if (d.path.empty()) throw ConfigError("dataset '" + d.name + "' has no path");
    if (d.schema.positive_labels.empty() || d.schema.negative_labels.empty()) {
      throw ConfigError("dataset '" + d.name + "' needs positive and negative labels");
    }
  }
}

NetworkConfig network_for(TrainerId trainer, std::size_t input_dim, const RunConfig& config) {
  if (trainer == TrainerId::mlp_bp) {
    return NetworkConfig::mlp(input_dim, config.mlp_hidden ? config.mlp_hidden : input_dim);
  }
  return NetworkConfig::flnn(input_dim, config.flnn_order);
}

double accuracy(const Network& net, const ParamVector& params, const Matrix& features,
                const std::vector<double>& targets) {
  if (features.empty()) throw InputError("accuracy: empty dataset");
  std::vector<double> y(features.rows());
  kernels::serial::outputs(net, params.span(), net.prepare(features), y);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (label_value(predict_class(y[i])) == targets[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(y.size());
}

std::uint64_t split_seed(std::uint64_t master, std::string_view dataset) {
  return mix_seed(mix_seed(master, fnv1a(dataset)), 0x73706c6974ULL);
}

std::uint64_t trial_seed(std::uint64_t master, std::string_view dataset, TrainerId trainer,
                         int fold, std::size_t trial) {
  std::uint64_t h = mix_seed(master, fnv1a(dataset));
  h = mix_seed(h, static_cast<std::uint64_t>(trainer) + 1);
  h = mix_seed(h, static_cast<std::uint64_t>(fold));
  return mix_seed(h, static_cast<std::uint64_t>(trial));
}

TrialMetrics run_trial(const TrialTask& task, const RunConfig& config) {
  const Network net(network_for(task.trainer, task.train_x->cols(), config));
  TrialMetrics m;
  ParamVector params;
  if (is_bp(task.trainer)) {
    BpConfig bp = config.bp;
    bp.seed = task.seed;
    auto r = train_bp(net, bp, *task.train_x, *task.train_t);
    params = std::move(r.params);
    m.iterations = r.epochs();
  } else {
    AbcConfig abc = config.abc;
    abc.bounds = Bounds::uniform(net.param_count(), config.abc_lower, config.abc_upper);
    abc.seed = task.seed;
    auto r = train_abc(net, abc, *task.train_x, *task.train_t);
    params = ParamVector(std::move(r.best_position));
    m.iterations = r.cycles();
  }
  m.train_mse = mse(net, params, *task.train_x, *task.train_t);
  m.train_accuracy = accuracy(net, params, *task.train_x, *task.train_t);
  m.test_mse = mse(net, params, *task.test_x, *task.test_t);
  m.test_accuracy = accuracy(net, params, *task.test_x, *task.test_t);
  return m;
}

const TrialReport* select_best(const std::vector<const TrialReport*>& cell) {
  const TrialReport* best = nullptr;
  for (const TrialReport* r : cell) {
    if (!r->ok) continue;
    if (!best) {
      best = r;
      continue;
    }
    const auto& a = r->metrics;
    const auto& b = best->metrics;
    if (a.train_accuracy != b.train_accuracy) {
      if (a.train_accuracy > b.train_accuracy) best = r;
    } else if (a.train_mse != b.train_mse) {
      if (a.train_mse < b.train_mse) best = r;
    } else if (r->seed < best->seed) {
      best = r;
    }
  }
  return best;
}

std::vector<ComplexityRow> complexity_rows(const RunConfig& config,
                                           const std::vector<std::size_t>& input_dims) {
  std::vector<ComplexityRow> rows;
  const bool want_mlp = std::count(config.trainers.begin(), config.trainers.end(),
                                   TrainerId::mlp_bp) > 0;
  const bool want_flnn = std::any_of(config.trainers.begin(), config.trainers.end(),
                                     [](TrainerId t) { return t != TrainerId::mlp_bp; });
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    for (TrainerId t : {TrainerId::mlp_bp, TrainerId::flnn_bp}) {
      if ((t == TrainerId::mlp_bp && !want_mlp) || (t != TrainerId::mlp_bp && !want_flnn)) {
        continue;
      }
      const Network net(network_for(t, input_dims[d], config));
      ComplexityRow row{config.datasets[d].name, t == TrainerId::mlp_bp ? "MLP" : "FLNN",
                        net.structure(), net.param_count(), std::nullopt, {}};
      const auto& table = published_param_counts();
      if (auto it = table.find(row.structure); it != table.end()) {
        row.published = it->second;
        if (it->second != row.params) {
          row.note = "published count " + std::to_string(it->second) +
                     " disagrees with the layer formula; formula value reported";
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<LoadedDataset> load_datasets(const RunConfig& config) {
  std::vector<LoadedDataset> out;
  for (const auto& spec : config.datasets) {
    auto raw = load_csv(spec.path, spec.schema);
    auto data = preprocess(raw, spec.schema, spec.missing, spec.name);
    auto folds = two_fold_split(data.size(), split_seed(config.master_seed, spec.name));
    out.push_back(LoadedDataset{spec, std::move(data), std::move(folds)});
  }
  return out;
}

ProtocolReport run_protocol(const RunConfig& config, const TrialRunner& runner,
                            const std::function<void(const TrialReport&)>& on_trial) {
  config.validate();
  return run_protocol(config, load_datasets(config), runner, on_trial);
}

ProtocolReport run_protocol(const RunConfig& config, const std::vector<LoadedDataset>& datasets,
                            const TrialRunner& runner,
                            const std::function<void(const TrialReport&)>& on_trial) {
  config.validate();

  // Scaled fold data, indexed [dataset][fold-assignment].
  struct FoldData {
    Matrix train_x, test_x;
    std::vector<double> train_t, test_t;
  };
  std::vector<std::array<FoldData, 2>> fold_data(datasets.size());
  std::vector<std::size_t> input_dims;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& ds = datasets[d];
    input_dims.push_back(ds.data.features.cols());
    const Dataset a = ds.data.subset(ds.folds.fold_a);
    const Dataset b = ds.data.subset(ds.folds.fold_b);
    for (int f = 0; f < 2; ++f) {
      const Dataset& train = f == 0 ? a : b;
      const Dataset& test = f == 0 ? b : a;
      const auto scaler = MinMaxScaler::fit(train.features);
      fold_data[d][f] = FoldData{scaler.transform(train.features), scaler.transform(test.features),
                                 train.targets, test.targets};
    }
  }

  std::vector<TrialTask> tasks;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const std::string& name = datasets[d].spec.name;
    for (TrainerId t : config.trainers) {
      for (int f = 1; f <= 2; ++f) {
        const FoldData& fd = fold_data[d][f - 1];
        for (std::size_t k = 0; k < config.trials; ++k) {
          tasks.push_back(TrialTask{name, t, f, k, trial_seed(config.master_seed, name, t, f, k),
                                    &fd.train_x, &fd.train_t, &fd.test_x, &fd.test_t});
        }
      }
    }
  }

  ProtocolReport report;
  report.trials.resize(tasks.size());
#ifdef _OPENMP
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#endif
  const auto ntasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < ntasks; ++i) {
    const TrialTask& task = tasks[static_cast<std::size_t>(i)];
    TrialReport r{task.dataset, task.trainer, task.fold, task.trial, task.seed, false, {}, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      r.metrics = runner(task, config);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    report.trials[static_cast<std::size_t>(i)] = r;
    if (on_trial) {
#pragma omp critical(flnn_on_trial)
      on_trial(report.trials[static_cast<std::size_t>(i)]);
    }
  }

  // Tasks were generated cell by cell, so each cell is a contiguous run.
  std::size_t pos = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (TrainerId t : config.trainers) {
      SummaryRow row{datasets[d].spec.name, t, true, {}, 0.0, 0.0, 0.0, 0.0};
      for (int f = 1; f <= 2; ++f) {
        std::vector<const TrialReport*> cell;
        for (std::size_t k = 0; k < config.trials; ++k) cell.push_back(&report.trials[pos++]);
        const TrialReport* best = select_best(cell);
        if (!best) {
          row.ok = false;
          row.error = "no successful trial in fold " + std::to_string(f);
          continue;
        }
        report.selections.push_back(*best);
        row.train_mse += best->metrics.train_mse / 2.0;
        row.train_accuracy += best->metrics.train_accuracy / 2.0;
        row.test_mse += best->metrics.test_mse / 2.0;
        row.test_accuracy += best->metrics.test_accuracy / 2.0;
      }
      report.summary.push_back(row);
    }
  }
  report.complexity = complexity_rows(config, input_dims);
  return report;
}

std::string trials_csv(const ProtocolReport& report) {
  std::ostringstream os;
  os << "dataset,trainer,fold,trial,seed,status,train_mse,train_accuracy_pct,test_mse,"
        "test_accuracy_pct,iterations,error\n";
  for (const auto& r : report.trials) {
    os << r.dataset << ',' << to_string(r.trainer) << ',' << r.fold << ',' << r.trial << ','
       << r.seed << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      os << exact(r.metrics.train_mse) << ',' << exact(r.metrics.train_accuracy) << ','
         << exact(r.metrics.test_mse) << ',' << exact(r.metrics.test_accuracy) << ','
         << r.metrics.iterations << ",\n";
    } else {
      os << ",,,,," << csv_escape(r.error) << '\n';
    }
  }
  return os.str();
}

namespace {

std::string selections_csv(const ProtocolReport& report) {
  std::ostringstream os;
  os << "dataset,trainer,fold,trial,seed,train_mse,train_accuracy_pct,test_mse,"
        "test_accuracy_pct,iterations\n";
  for (const auto& r : report.selections) {
    os << r.dataset << ',' << to_string(r.trainer) << ',' << r.fold << ',' << r.trial << ','
       << r.seed << ',' << exact(r.metrics.train_mse) << ',' << exact(r.metrics.train_accuracy)
       << ',' << exact(r.metrics.test_mse) << ',' << exact(r.metrics.test_accuracy) << ','
       << r.metrics.iterations << '\n';
  }
  return os.str();
}

std::string timings_csv(const ProtocolReport& report) {
  std::ostringstream os;
  os << "dataset,trainer,fold,trial,wall_ms\n";
  for (const auto& r : report.trials) {
    os << r.dataset << ',' << to_string(r.trainer) << ',' << r.fold << ',' << r.trial << ','
       << fixed6(r.wall_ms) << '\n';
  }
  return os.str();
}

nlohmann::ordered_json metrics_json(const TrialMetrics& m) {
  return {{"train_mse", fixed6(m.train_mse)},
          {"train_accuracy_pct", fixed6(m.train_accuracy)},
          {"test_mse", fixed6(m.test_mse)},
          {"test_accuracy_pct", fixed6(m.test_accuracy)},
          {"iterations", m.iterations}};
}

std::string summary_json(const ProtocolReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["summary"] = ordered_json::array();
  for (const auto& s : report.summary) {
    ordered_json row{{"dataset", s.dataset}, {"trainer", std::string(to_string(s.trainer))},
                     {"status", s.ok ? "ok" : "error"}};
    if (s.ok) {
      row["train_mse"] = fixed6(s.train_mse);
      row["train_accuracy_pct"] = fixed6(s.train_accuracy);
      row["test_mse"] = fixed6(s.test_mse);
      row["test_accuracy_pct"] = fixed6(s.test_accuracy);
    } else {
      row["error"] = s.error;
    }
    j["summary"].push_back(row);
  }
  j["selections"] = ordered_json::array();
  for (const auto& r : report.selections) {
    ordered_json row{{"dataset", r.dataset}, {"trainer", std::string(to_string(r.trainer))},
                     {"fold", r.fold},       {"trial", r.trial},
                     {"seed", r.seed},       {"metrics", metrics_json(r.metrics)}};
    j["selections"].push_back(row);
  }
  j["complexity"] = ordered_json::array();
  for (const auto& c : report.complexity) {
    ordered_json row{{"dataset", c.dataset},
                     {"network", c.network},
                     {"structure", c.structure},
                     {"params", c.params}};
    if (c.published) row["published_params"] = *c.published;
    if (!c.note.empty()) row["note"] = c.note;
    j["complexity"].push_back(row);
  }
  // Numbers are kept as fixed-6 strings so the file is byte-stable.
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string summary_csv(const ProtocolReport& report) {
  std::ostringstream os;
  os << "dataset,trainer,status,train_mse,train_accuracy_pct,test_mse,test_accuracy_pct\n";
  for (const auto& s : report.summary) {
    os << s.dataset << ',' << to_string(s.trainer) << ',';
    if (s.ok) {
      os << "ok," << fixed6(s.train_mse) << ',' << fixed6(s.train_accuracy) << ','
         << fixed6(s.test_mse) << ',' << fixed6(s.test_accuracy) << '\n';
    } else {
      os << "error,,,,\n";
    }
  }
  return os.str();
}

std::string complexity_csv(const ProtocolReport& report) {
  std::ostringstream os;
  os << "dataset,network,structure,params,published_params,note\n";
  for (const auto& c : report.complexity) {
    os << c.dataset << ',' << c.network << ',' << c.structure << ',' << c.params << ','
       << (c.published ? std::to_string(*c.published) : "") << ',' << csv_escape(c.note)
       << '\n';
  }
  return os.str();
}

std::string format_summary_table(const ProtocolReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-9s %12s %12s %12s %12s\n", "dataset", "trainer",
                "train_mse", "train_acc%", "test_mse", "test_acc%");
  os << line;
  for (const auto& s : report.summary) {
    if (s.ok) {
      std::snprintf(line, sizeof line, "%-10s %-9s %12.6f %12.6f %12.6f %12.6f\n",
                    s.dataset.c_str(), std::string(to_string(s.trainer)).c_str(), s.train_mse,
                    s.train_accuracy, s.test_mse, s.test_accuracy);
    } else {
      std::snprintf(line, sizeof line, "%-10s %-9s  ERROR: %s\n", s.dataset.c_str(),
                    std::string(to_string(s.trainer)).c_str(), s.error.c_str());
    }
    os << line;
  }
  return os.str();
}

void emit_reports(const ProtocolReport& report, const std::filesystem::path& output_dir) {
  if (report.trials.empty()) throw InputError("emit_reports: no trial reports");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());
  {
    const auto probe = output_dir / ".write-probe";
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + output_dir.string() + " is not writable");
    out.close();
    std::filesystem::remove(probe, ec);
  }

  const std::vector<std::pair<std::string, std::string>> files{
      {"trials.csv", trials_csv(report)},         {"selections.csv", selections_csv(report)},
      {"summary.csv", summary_csv(report)},       {"complexity.csv", complexity_csv(report)},
      {"summary.json", summary_json(report)},     {"timings.csv", timings_csv(report)}};
  for (const auto& [name, text] : files) write_file(output_dir / (name + ".tmp"), text);
  for (const auto& [name, text] : files) {
    std::filesystem::rename(output_dir / (name + ".tmp"), output_dir / name, ec);
    if (ec) throw IoError("cannot rename into " + (output_dir / name).string());
  }
}

}  // namespace flnn
