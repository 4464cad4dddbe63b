#include "flnn/train_bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flnn/error.hpp"
#include "flnn/rng.hpp"

namespace flnn {

void BpConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("bp learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("bp momentum must be in [0, 1)");
  if (max_epochs < 1) throw ConfigError("bp max_epochs must be >= 1");
  if (!(min_error >= 0.0)) throw ConfigError("bp min_error must be >= 0");
  if (!(init_low <= init_high)) throw ConfigError("bp init range is inverted");
}

ParamVector init_params(const Network& net, double low, double high, std::uint64_t seed) {
  Rng rng(seed);
  ParamVector p(net.param_count());
  for (double& v : p.values) v = rng.uniform(low, high);
  return p;
}

double mse(const Network& net, const ParamVector& params, const Matrix& features,
           const std::vector<double>& targets) {
  if (features.empty()) throw InputError("mse: empty dataset");
  net.check_params(params.span());
  return kernels::serial::mse(net, params.span(), net.prepare(features), targets);
}

BpResult train_bp(const Network& net, const BpConfig& bp, const Matrix& features,
                  const std::vector<double>& targets) {
  return train_bp_from(net, bp, init_params(net, bp.init_low, bp.init_high, bp.seed), features,
                       targets);
}

BpResult train_bp_from(const Network& net, const BpConfig& bp, ParamVector start,
                       const Matrix& features, const std::vector<double>& targets) {
  bp.validate();
  if (features.empty()) throw InputError("train_bp: empty training set");
  if (features.rows() != targets.size()) throw InputError("train_bp: target count mismatch");
  net.check_params(start.span());

  const Matrix rows = net.prepare(features);
  const std::size_t np = net.param_count();
  BpResult result{std::move(start), {}};
  auto& w = result.params.values;
  std::vector<double> grad(np), step(np, 0.0);

  // Online mode: a separate stream so the init draws stay identical to batch mode.
  Rng shuffle_rng(mix_seed(bp.seed, 0x6f6e6c696e65ULL));
  std::vector<std::size_t> order(rows.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scratch(net.scratch_size());

  for (std::size_t epoch = 1; epoch <= bp.max_epochs; ++epoch) {
    if (!bp.online) {
      kernels::mse_gradient(bp.backend, net, w, rows, targets, grad);
      for (std::size_t i = 0; i < np; ++i) {
        step[i] = -bp.learning_rate * grad[i] + bp.momentum * step[i];
        w[i] += step[i];
      }
    } else {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.below(i)]);
      }
      for (std::size_t r : order) {
        std::fill(grad.begin(), grad.end(), 0.0);
        net.accumulate_gradient(w, rows.row(r), targets[r], grad, scratch);
        for (std::size_t i = 0; i < np; ++i) {
          step[i] = -bp.learning_rate * grad[i] + bp.momentum * step[i];
          w[i] += step[i];
        }
      }
    }
    const double err = kernels::mse(bp.backend, net, w, rows, targets);
    const bool weights_finite =
        std::all_of(w.begin(), w.end(), [](double v) { return std::isfinite(v); });
    if (!std::isfinite(err) || !weights_finite) {
      throw TrainingError("backpropagation diverged: non-finite MSE at epoch " +
                          std::to_string(epoch));
    }
    result.history.push_back(err);
    if (err <= bp.min_error) break;
  }
  return result;
}

}  // namespace flnn
