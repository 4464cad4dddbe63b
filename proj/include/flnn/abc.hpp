#pragma once

// Artificial Bee Colony optimizer over a box in R^D.
//
// One cycle runs three phases over a colony of SN food sources:
//   employed   one neighbour candidate per source, greedy replacement;
//   onlooker   SN more candidates on sources drawn by fitness-proportional
//              roulette (with replacement), greedy replacement;
//   scout      at most one source whose trial counter exceeds `limit` is
//              re-drawn uniformly from the box.
// The best position ever evaluated is kept apart from the colony, so scout
// replacement never loses it.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "flnn/error.hpp"
#include "flnn/kernels.hpp"
#include "flnn/matrix.hpp"
#include "flnn/models.hpp"
#include "flnn/rng.hpp"

namespace flnn {

/// Per-dimension closed interval [lower[j], upper[j]].
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds uniform(std::size_t dim, double lo, double hi);
  std::size_t dim() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const;
  void validate() const;
};

struct AbcConfig {
  std::size_t colony_size = 50;  // SN, number of food sources
  std::size_t max_cycles = 100;  // MCN
  double min_error = 0.001;      // stop once best objective <= this
  std::size_t limit = 0;         // abandonment threshold; 0 selects SN * D
  Bounds bounds;                 // its dimension is the search dimension D
  std::uint64_t seed = 0;
  /// Evaluate the employed-phase candidates with OpenMP. The objective must
  /// then be safe to call concurrently. Results are identical either way.
  bool parallel_employed = true;

  std::size_t dim() const noexcept { return bounds.dim(); }
  std::size_t effective_limit() const noexcept {
    return limit ? limit : colony_size * bounds.dim();
  }
  void validate() const;
};

/// Deterministic objective to minimise.
using Objective = std::function<double(std::span<const double>)>;

struct FoodSource {
  std::vector<double> position;
  double objective = 0.0;
  double fitness = 0.0;
  std::size_t trials = 0;  // consecutive rejected candidates
};

/// The objective returned a non-finite value.
class OptimizerError : public TrainingError {
 public:
  OptimizerError(const std::string& what, std::vector<double> position)
      : TrainingError(what), position_(std::move(position)) {}
  const std::vector<double>& position() const noexcept { return position_; }

 private:
  std::vector<double> position_;
};

/// 1 / (1 + f) for f >= 0, 1 + |f| for f < 0. Strictly positive and
/// decreasing in f. Throws InputError for non-finite f.
double fitness(double f);

/// fit_i / sum(fit). Empty input gives an empty vector.
std::vector<double> selection_probabilities(std::span<const FoodSource> colony);

/// v = x_i with v[j] = x_i[j] + phi * (x_i[j] - x_k[j]), clamped into the box.
std::vector<double> neighbor_candidate(std::span<const double> xi, std::span<const double> xk,
                                       std::size_t j, double phi, const Bounds& bounds);

/// Draws j ~ U{0..D-1}, k ~ U{sources except i}, phi ~ U[-1, 1] and applies
/// the explicit overload. Requires colony.size() >= 2.
std::vector<double> neighbor_candidate(std::span<const FoodSource> colony, std::size_t i,
                                       const Bounds& bounds, Rng& rng);

/// x[j] = lower[j] + u[j] * (upper[j] - lower[j]).
std::vector<double> scout_position(const Bounds& bounds, std::span<const double> u);
std::vector<double> scout_position(const Bounds& bounds, Rng& rng);

class BeeColony {
 public:
  BeeColony(Objective objective, AbcConfig config);

  /// Random initial colony. Called by the constructor.
  void initialize();
  void employed_phase();
  void onlooker_phase();
  /// Returns the replaced source index, or -1 when none was abandoned.
  std::ptrdiff_t scout_phase();
  void run_cycle();

  const std::vector<FoodSource>& sources() const noexcept { return sources_; }
  const std::vector<double>& best_position() const noexcept { return best_position_; }
  double best_objective() const noexcept { return best_objective_; }
  std::size_t evaluations() const noexcept { return evaluations_; }
  const AbcConfig& config() const noexcept { return config_; }

  /// Called with every vector handed to the objective (tests use it).
  void set_evaluation_observer(std::function<void(std::span<const double>)> fn) {
    observer_ = std::move(fn);
  }

 private:
  double evaluate(std::span<const double> x);
  void evaluate_batch(const std::vector<std::vector<double>>& xs, std::vector<double>& out);
  void greedy(std::size_t i, std::vector<double> candidate, double value);
  void remember(std::span<const double> x, double value);

  Objective objective_;
  AbcConfig config_;
  Rng rng_;
  std::vector<FoodSource> sources_;
  std::vector<double> best_position_;
  double best_objective_ = 0.0;
  std::size_t evaluations_ = 0;
  std::function<void(std::span<const double>)> observer_;
};

struct AbcResult {
  std::vector<double> best_position;
  double best_objective = 0.0;
  /// history[0] is the best of the initial colony, history[c] the best after cycle c.
  std::vector<double> history;
  std::size_t evaluations = 0;
  std::size_t cycles() const noexcept { return history.empty() ? 0 : history.size() - 1; }
};

/// Runs cycles until max_cycles or best objective <= min_error.
AbcResult run_abc(const Objective& objective, const AbcConfig& config);

/// Minimises the training MSE of `net` over its ParamVector. The bounds must
/// have dimension net.param_count(); throws ConfigError otherwise.
AbcResult train_abc(const Network& net, const AbcConfig& config, const Matrix& features,
                    const std::vector<double>& targets);

}  // namespace flnn
