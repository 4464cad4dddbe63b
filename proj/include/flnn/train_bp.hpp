#pragma once

#include <cstdint>
#include <vector>

#include "flnn/kernels.hpp"
#include "flnn/matrix.hpp"
#include "flnn/models.hpp"

namespace flnn {

struct BpConfig {
  double learning_rate = 0.3;
  double momentum = 0.7;
  std::size_t max_epochs = 1000;
  double min_error = 0.001;  // MSE threshold
  double init_low = -1.0;
  double init_high = 1.0;
  bool online = false;  // per-sample updates, shuffled each epoch
  std::uint64_t seed = 0;
  kernels::Backend backend = kernels::Backend::openmp;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
};

/// Each entry uniform in [low, high); low == high gives a constant vector.
ParamVector init_params(const Network& net, double low, double high, std::uint64_t seed);

/// Mean of (target - forward(x))^2 over raw (unprepared) features.
/// Throws InputError on an empty dataset.
double mse(const Network& net, const ParamVector& params, const Matrix& features,
           const std::vector<double>& targets);

struct BpResult {
  ParamVector params;
  std::vector<double> history;  // MSE after each epoch
  std::size_t epochs() const noexcept { return history.size(); }
};

/// Gradient descent with heavy-ball momentum on the training MSE:
///   step_t = -lr * grad + momentum * step_{t-1}
/// Full-batch by default. Stops after max_epochs or once the post-epoch MSE
/// drops to min_error. Throws TrainingError if the MSE becomes non-finite.
BpResult train_bp(const Network& net, const BpConfig& bp, const Matrix& features,
                  const std::vector<double>& targets);

/// Same, starting from given parameters.
BpResult train_bp_from(const Network& net, const BpConfig& bp, ParamVector start,
                       const Matrix& features, const std::vector<double>& targets);

}  // namespace flnn
