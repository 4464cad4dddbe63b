#include "flnn/abc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "flnn/train_bp.hpp"

namespace flnn {

namespace {

std::string describe(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ']';
  return os.str();
}

}  // namespace

Bounds Bounds::uniform(std::size_t dim, double lo, double hi) {
  return Bounds{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lower[j] && x[j] <= upper[j])) return false;
  }
  return true;
}

void Bounds::validate() const {
  if (lower.size() != upper.size()) throw ConfigError("abc bounds: lower/upper length differ");
  if (lower.empty()) throw ConfigError("abc bounds: dimension must be >= 1");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j])) {
      throw ConfigError("abc bounds: dimension " + std::to_string(j) + " is degenerate");
    }
  }
}

void AbcConfig::validate() const {
  if (colony_size < 2) throw ConfigError("abc colony_size must be >= 2");
  if (!(min_error >= 0.0)) throw ConfigError("abc min_error must be >= 0");
  bounds.validate();
}

double fitness(double f) {
  if (!std::isfinite(f)) throw InputError("fitness: objective value is not finite");
  return f >= 0.0 ? 1.0 / (1.0 + f) : 1.0 + std::fabs(f);
}

std::vector<double> selection_probabilities(std::span<const FoodSource> colony) {
  double total = 0.0;
  for (const auto& s : colony) total += s.fitness;
  std::vector<double> p;
  p.reserve(colony.size());
  for (const auto& s : colony) p.push_back(s.fitness / total);
  return p;
}

std::vector<double> neighbor_candidate(std::span<const double> xi, std::span<const double> xk,
                                       std::size_t j, double phi, const Bounds& bounds) {
  std::vector<double> v(xi.begin(), xi.end());
  v[j] = std::clamp(xi[j] + phi * (xi[j] - xk[j]), bounds.lower[j], bounds.upper[j]);
  return v;
}

std::vector<double> neighbor_candidate(std::span<const FoodSource> colony, std::size_t i,
                                       const Bounds& bounds, Rng& rng) {
  const std::size_t j = rng.below(bounds.dim());
  std::size_t k = rng.below(colony.size() - 1);
  if (k >= i) ++k;
  const double phi = rng.uniform(-1.0, 1.0);
  return neighbor_candidate(colony[i].position, colony[k].position, j, phi, bounds);
}

std::vector<double> scout_position(const Bounds& bounds, std::span<const double> u) {
  std::vector<double> x(bounds.dim());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = bounds.lower[j] + u[j] * (bounds.upper[j] - bounds.lower[j]);
  }
  return x;
}

std::vector<double> scout_position(const Bounds& bounds, Rng& rng) {
  std::vector<double> u(bounds.dim());
  for (double& v : u) v = rng.uniform();
  return scout_position(bounds, u);
}

BeeColony::BeeColony(Objective objective, AbcConfig config)
    : objective_(std::move(objective)), config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
  initialize();
}

double BeeColony::evaluate(std::span<const double> x) {
  if (observer_) observer_(x);
  const double value = objective_(x);
  ++evaluations_;
  if (!std::isfinite(value)) {
    throw OptimizerError("objective returned a non-finite value at " + describe(x),
                         std::vector<double>(x.begin(), x.end()));
  }
  return value;
}

void BeeColony::evaluate_batch(const std::vector<std::vector<double>>& xs,
                               std::vector<double>& out) {
  out.assign(xs.size(), 0.0);
  if (!config_.parallel_employed) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = evaluate(xs[i]);
    return;
  }
  if (observer_) {
    for (const auto& x : xs) observer_(x);
  }
  std::vector<std::exception_ptr> errors(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static) if (!kernels::in_parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u] = objective_(xs[u]);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  evaluations_ += xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (!std::isfinite(out[i])) {
      throw OptimizerError("objective returned a non-finite value at " + describe(xs[i]), xs[i]);
    }
  }
}

void BeeColony::remember(std::span<const double> x, double value) {
  if (best_position_.empty() || value < best_objective_) {
    best_position_.assign(x.begin(), x.end());
    best_objective_ = value;
  }
}

void BeeColony::initialize() {
  const std::size_t sn = config_.colony_size;
  std::vector<std::vector<double>> xs(sn);
  for (auto& x : xs) x = scout_position(config_.bounds, rng_);
  std::vector<double> values;
  evaluate_batch(xs, values);
  sources_.assign(sn, {});
  best_position_.clear();
  for (std::size_t i = 0; i < sn; ++i) {
    sources_[i] = FoodSource{std::move(xs[i]), values[i], fitness(values[i]), 0};
    remember(sources_[i].position, values[i]);
  }
}

void BeeColony::greedy(std::size_t i, std::vector<double> candidate, double value) {
  FoodSource& s = sources_[i];
  const double fit = fitness(value);
  if (fit > s.fitness) {
    s.position = std::move(candidate);
    s.objective = value;
    s.fitness = fit;
    s.trials = 0;
    remember(s.position, value);
  } else {
    ++s.trials;
  }
}

void BeeColony::employed_phase() {
  // Candidates are drawn against the colony as it stood at the start of the
  // phase, so they can be evaluated concurrently and applied in source order.
  const std::size_t sn = sources_.size();
  std::vector<std::vector<double>> candidates(sn);
  for (std::size_t i = 0; i < sn; ++i) {
    candidates[i] = neighbor_candidate(sources_, i, config_.bounds, rng_);
  }
  std::vector<double> values;
  evaluate_batch(candidates, values);
  for (std::size_t i = 0; i < sn; ++i) greedy(i, std::move(candidates[i]), values[i]);
}

void BeeColony::onlooker_phase() {
  const auto p = selection_probabilities(sources_);
  const std::size_t sn = sources_.size();
  for (std::size_t placed = 0; placed < sn; ++placed) {
    const double r = rng_.uniform();
    std::size_t i = 0;
    double cumulative = p[0];
    while (r >= cumulative && i + 1 < sn) cumulative += p[++i];
    auto v = neighbor_candidate(sources_, i, config_.bounds, rng_);
    const double value = evaluate(v);
    greedy(i, std::move(v), value);
  }
}

std::ptrdiff_t BeeColony::scout_phase() {
  const std::size_t limit = config_.effective_limit();
  std::ptrdiff_t worst = -1;
  std::size_t most = limit;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].trials > most) {
      most = sources_[i].trials;
      worst = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (worst < 0) return worst;
  auto x = scout_position(config_.bounds, rng_);
  const double value = evaluate(x);
  FoodSource& s = sources_[static_cast<std::size_t>(worst)];
  s = FoodSource{std::move(x), value, fitness(value), 0};
  remember(s.position, value);
  return worst;
}

void BeeColony::run_cycle() {
  employed_phase();
  onlooker_phase();
  scout_phase();
}

AbcResult run_abc(const Objective& objective, const AbcConfig& config) {
  BeeColony colony(objective, config);
  AbcResult result;
  result.history.push_back(colony.best_objective());
  for (std::size_t cycle = 1; cycle <= config.max_cycles; ++cycle) {
    if (colony.best_objective() <= config.min_error) break;
    colony.run_cycle();
    result.history.push_back(colony.best_objective());
  }
  result.best_position = colony.best_position();
  result.best_objective = colony.best_objective();
  result.evaluations = colony.evaluations();
  return result;
}

AbcResult train_abc(const Network& net, const AbcConfig& config, const Matrix& features,
                    const std::vector<double>& targets) {
  if (config.dim() != net.param_count()) {
    throw ConfigError("abc dimension " + std::to_string(config.dim()) +
                      " does not match the network's " + std::to_string(net.param_count()) +
                      " parameters");
  }
  if (features.empty()) throw InputError("train_abc: empty training set");
  if (features.rows() != targets.size()) throw InputError("train_abc: target count mismatch");
  const Matrix rows = net.prepare(features);
  // Parallelism lives across candidates here, so each evaluation is serial.
  Objective objective = [&net, &rows, &targets](std::span<const double> w) {
    return kernels::serial::mse(net, w, rows, targets);
  };
  return run_abc(objective, config);
}

}  // namespace flnn
