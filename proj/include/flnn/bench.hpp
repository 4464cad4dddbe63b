#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flnn/abc.hpp"
#include "flnn/data.hpp"
#include "flnn/models.hpp"
#include "flnn/train_bp.hpp"

namespace flnn {

enum class TrainerId { mlp_bp, flnn_bp, flnn_abc };

std::string_view to_string(TrainerId t);
std::optional<TrainerId> parse_trainer(std::string_view s);

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  CsvSchema schema;
  MissingPolicy missing = MissingPolicy::drop_rows;
};

struct RunConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<TrainerId> trainers{TrainerId::mlp_bp, TrainerId::flnn_bp, TrainerId::flnn_abc};
  std::size_t trials = 10;  // per dataset x trainer x fold
  std::uint64_t master_seed = 20120101;
  std::size_t flnn_order = 2;
  std::size_t mlp_hidden = 0;  // 0: same as the input width
  BpConfig bp;
  AbcConfig abc;  // bounds are filled per network from abc_lower/abc_upper
  double abc_lower = -10.0;
  double abc_upper = 10.0;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0: OpenMP default

  void validate() const;
};

/// Network used by a trainer on a dataset with `input_dim` features.
NetworkConfig network_for(TrainerId trainer, std::size_t input_dim, const RunConfig& config);

/// Percentage of rows whose predicted class matches the target.
double accuracy(const Network& net, const ParamVector& params, const Matrix& features,
                const std::vector<double>& targets);

/// Seed of one trial, derived by hashing the cell tuple into the master seed.
std::uint64_t trial_seed(std::uint64_t master, std::string_view dataset, TrainerId trainer,
                         int fold, std::size_t trial);
/// Seed of a dataset's fold split; shared by every trainer.
std::uint64_t split_seed(std::uint64_t master, std::string_view dataset);

struct TrialTask {
  std::string dataset;
  TrainerId trainer;
  int fold;  // 1: fold A trains and fold B tests; 2: swapped
  std::size_t trial;
  std::uint64_t seed;
  const Matrix* train_x;
  const std::vector<double>* train_t;
  const Matrix* test_x;
  const std::vector<double>* test_t;
};

struct TrialMetrics {
  double train_mse = 0.0;
  double train_accuracy = 0.0;
  double test_mse = 0.0;
  double test_accuracy = 0.0;
  std::size_t iterations = 0;  // epochs or cycles
};

struct TrialReport {
  std::string dataset;
  TrainerId trainer;
  int fold;
  std::size_t trial;
  std::uint64_t seed;
  bool ok = false;
  std::string error;
  TrialMetrics metrics;
  double wall_ms = 0.0;
};

struct SummaryRow {
  std::string dataset;
  TrainerId trainer;
  bool ok = false;
  std::string error;
  double train_mse = 0.0;
  double train_accuracy = 0.0;
  double test_mse = 0.0;
  double test_accuracy = 0.0;
};

struct ComplexityRow {
  std::string dataset;
  std::string network;  // "MLP" or "FLNN"
  std::string structure;
  std::size_t params;
  std::optional<std::size_t> published;
  std::string note;
};

struct ProtocolReport {
  std::vector<TrialReport> trials;      // canonical order
  std::vector<TrialReport> selections;  // one per dataset x trainer x fold
  std::vector<SummaryRow> summary;      // one per dataset x trainer
  std::vector<ComplexityRow> complexity;
};

using TrialRunner = std::function<TrialMetrics(const TrialTask&, const RunConfig&)>;

/// Trains the trial's network and measures it on both folds.
TrialMetrics run_trial(const TrialTask& task, const RunConfig& config);

/// Best training accuracy, then lower training MSE, then lower seed.
/// Returns nullptr when no trial succeeded.
const TrialReport* select_best(const std::vector<const TrialReport*>& cell);

/// Parameter-count table for every dataset x network type in `config`.
std::vector<ComplexityRow> complexity_rows(const RunConfig& config,
                                           const std::vector<std::size_t>& input_dims);

struct LoadedDataset {
  DatasetSpec spec;
  Dataset data;
  FoldPair folds;
};

/// Loads, cleans and splits every configured dataset. Throws DataError.
std::vector<LoadedDataset> load_datasets(const RunConfig& config);

/// Runs datasets x trainers x 2 folds x trials. Trials run in parallel;
/// results are merged in canonical order. Trial failures are recorded, not
/// thrown. `on_trial` is invoked serially as trials finish.
ProtocolReport run_protocol(const RunConfig& config, const TrialRunner& runner = run_trial,
                            const std::function<void(const TrialReport&)>& on_trial = {});
ProtocolReport run_protocol(const RunConfig& config, const std::vector<LoadedDataset>& datasets,
                            const TrialRunner& runner = run_trial,
                            const std::function<void(const TrialReport&)>& on_trial = {});

/// Writes trials.csv, selections.csv, summary.csv, complexity.csv,
/// summary.json and timings.csv. Everything is written to temporaries and
/// renamed once all succeeded. Throws IoError before writing anything if the
/// directory is unusable, InputError if the report is empty.
void emit_reports(const ProtocolReport& report, const std::filesystem::path& output_dir);

std::string trials_csv(const ProtocolReport& report);
std::string summary_csv(const ProtocolReport& report);
std::string complexity_csv(const ProtocolReport& report);
std::string format_summary_table(const ProtocolReport& report);

/// Fixed 6-decimal rendering used by the summary reports.
std::string fixed6(double v);
/// Round-trip rendering used for per-trial values, so summaries can be
/// re-derived exactly.
std::string exact(double v);

}  // namespace flnn
