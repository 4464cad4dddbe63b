#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "flnn/error.hpp"
#include "flnn/kernels.hpp"
#include "flnn/rng.hpp"
#include "flnn/train_bp.hpp"
#include "oracles.hpp"

using namespace flnn;

namespace {

Matrix column(std::initializer_list<double> xs) {
  Matrix m(xs.size(), 1);
  std::size_t r = 0;
  for (double x : xs) m(r++, 0) = x;
  return m;
}

}  // namespace

TEST(InitParams, DegenerateRangeAndDeterminism) {
  const Network net(NetworkConfig::mlp(4, 4));
  EXPECT_EQ(init_params(net, 0.0, 0.0, 9).values, std::vector<double>(net.param_count(), 0.0));
  EXPECT_EQ(init_params(net, -1.0, 1.0, 9), init_params(net, -1.0, 1.0, 9));
  EXPECT_NE(init_params(net, -1.0, 1.0, 9), init_params(net, -1.0, 1.0, 10));
}

TEST(InitParams, UniformSampleMean) {
  const Network net(NetworkConfig::flnn(9999, 1));  // 10^4 parameters
  const auto p = init_params(net, -1.0, 1.0, 42);
  ASSERT_EQ(p.size(), 10000u);
  double sum = 0.0;
  for (double v : p.values) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
    sum += v;
  }
  EXPECT_LT(std::fabs(sum / 1e4), 0.05);
}

TEST(Mse, ZeroParamsOnSignTargetsIsOne) {
  const Network net(NetworkConfig::flnn(1, 1));
  EXPECT_EQ(mse(net, ParamVector(2), column({0.3, -2, 5}), {1, -1, 1}), 1.0);
}

TEST(Mse, SingleSampleHalfOutput) {
  const Network net(NetworkConfig::flnn(1, 1));
  const ParamVector p(std::vector<double>{std::atanh(0.5), 0.0});
  EXPECT_NEAR(mse(net, p, column({1.0}), {1.0}), 0.25, 1e-15);
  EXPECT_THROW(mse(net, p, Matrix(), {}), InputError);
}

TEST(TrainBp, FitsSingleSampleTarget) {
  const Network net(NetworkConfig::flnn(1, 1));
  BpConfig bp;
  bp.min_error = 0.0;
  bp.seed = 3;
  const double target = 0.46212;
  const auto r = train_bp(net, bp, column({1.0}), {target});
  EXPECT_LT(r.history.back(), 1e-4);
  EXPECT_EQ(r.epochs(), 1000u);

  // Grid search over the pre-activation s = w + b for the best fit.
  double best_s = 0.0, best_err = 1e300;
  for (int i = -20000; i <= 20000; ++i) {
    const double s = i * 1e-4;
    const double e = (target - std::tanh(s)) * (target - std::tanh(s));
    if (e < best_err) best_err = e, best_s = s;
  }
  EXPECT_NEAR(r.params.values[0] + r.params.values[1], best_s, 1e-3);
}

TEST(TrainBp, InfiniteMinErrorStopsAfterFirstEpoch) {
  const Network net(NetworkConfig::flnn(1, 1));
  BpConfig bp;
  bp.min_error = std::numeric_limits<double>::infinity();
  const auto r = train_bp(net, bp, column({1.0, -1.0}), {1.0, -1.0});
  EXPECT_EQ(r.epochs(), 1u);
}

TEST(TrainBp, ZeroMomentumMatchesPlainGradientDescent) {
  const Network net(NetworkConfig::flnn(1, 1));
  const std::vector<double> xs{0.8, -0.4, 0.1}, ts{1.0, -1.0, 1.0};
  BpConfig bp;
  bp.learning_rate = 0.3;
  bp.momentum = 0.0;
  bp.max_epochs = 40;
  bp.min_error = 0.0;
  bp.backend = kernels::Backend::serial;
  const ParamVector start(std::vector<double>{0.2, -0.1});
  const auto r = train_bp_from(net, bp, start, column({0.8, -0.4, 0.1}), ts);

  double w = 0.2, b = -0.1;
  for (std::size_t epoch = 0; epoch < 40; ++epoch) {
    double gw = 0.0, gb = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double y = std::tanh(w * xs[i] + b);
      const double d = -2.0 * (ts[i] - y) * (1.0 - y * y) / 3.0;
      gw += d * xs[i];
      gb += d;
    }
    w -= 0.3 * gw;
    b -= 0.3 * gb;
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double e = ts[i] - std::tanh(w * xs[i] + b);
      m += e * e / 3.0;
    }
    EXPECT_NEAR(r.history[epoch], m, 1e-13);
  }
  EXPECT_NEAR(r.params.values[0], w, 1e-12);
  EXPECT_NEAR(r.params.values[1], b, 1e-12);
}

TEST(TrainBp, MomentumAddsHeavyBallTerm) {
  // Two epochs by hand: step2 = -lr*g2 + mu*step1.
  const Network net(NetworkConfig::flnn(1, 1));
  BpConfig bp;
  bp.learning_rate = 0.1;
  bp.momentum = 0.5;
  bp.max_epochs = 2;
  bp.min_error = 0.0;
  const Matrix x = column({0.5});
  auto grad = [&](double w, double b) {
    const double y = std::tanh(w * 0.5 + b);
    const double d = -2.0 * (1.0 - y) * (1.0 - y * y);
    return std::pair{d * 0.5, d};
  };
  const auto r = train_bp_from(net, bp, ParamVector(std::vector<double>{0.0, 0.0}), x, {1.0});
  auto [g1w, g1b] = grad(0.0, 0.0);
  const double s1w = -0.1 * g1w, s1b = -0.1 * g1b;
  auto [g2w, g2b] = grad(s1w, s1b);
  EXPECT_NEAR(r.params.values[0], s1w + (-0.1 * g2w + 0.5 * s1w), 1e-14);
  EXPECT_NEAR(r.params.values[1], s1b + (-0.1 * g2b + 0.5 * s1b), 1e-14);
}

TEST(TrainBpProperty, AnalyticGradientMatchesFiniteDifferences) {
  Rng rng(21);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const bool mlp = trial % 2;
    const std::size_t n = 1 + rng.below(4);
    const Network net(mlp ? NetworkConfig::mlp(n, 1 + rng.below(4)) : NetworkConfig::flnn(n, 1 + rng.below(3)));
    if (net.param_count() > 30) continue;
    const std::size_t rows = 1 + rng.below(10);
    Matrix raw(rows, n);
    std::vector<double> t(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < n; ++c) raw(r, c) = rng.uniform(-1.0, 1.0);
      t[r] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    std::vector<double> p(net.param_count());
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    const Matrix prepared = net.prepare(raw);
    std::vector<double> g(p.size());
    kernels::serial::mse_gradient(net, p, prepared, t, g);
    const auto fd = oracle::finite_difference(
        [&](const std::vector<double>& q) { return kernels::serial::mse(net, q, prepared, t); }, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_LE(std::fabs(g[i] - fd[i]), 1e-4 * std::max(std::fabs(g[i]), std::fabs(fd[i])) + 1e-9)
          << "trial " << trial << " param " << i;
    }
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(TrainBpProperty, SmallStepsNeverIncreaseMse) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const bool mlp = trial % 2;
    const Network net(mlp ? NetworkConfig::mlp(3, 3) : NetworkConfig::flnn(3, 2));
    Matrix raw(8, 3);
    std::vector<double> t(8);
    for (std::size_t r = 0; r < 8; ++r) {
      for (std::size_t c = 0; c < 3; ++c) raw(r, c) = rng.uniform(-1.0, 1.0);
      t[r] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    BpConfig bp;
    bp.learning_rate = 1e-3;
    bp.momentum = 0.0;
    bp.max_epochs = 50;
    bp.min_error = 0.0;
    bp.seed = static_cast<std::uint64_t>(trial);
    const auto start = init_params(net, -1.0, 1.0, bp.seed);
    const double m0 = mse(net, start, raw, t);
    const auto r = train_bp_from(net, bp, start, raw, t);
    double prev = m0;
    for (double m : r.history) {
      EXPECT_LE(m, prev);
      prev = m;
    }
  }
}

TEST(TrainBp, DeterministicHistory) {
  const Network net(NetworkConfig::mlp(2, 3));
  Matrix raw(4, 2);
  raw(0, 0) = 1; raw(1, 1) = 1; raw(2, 0) = -1; raw(3, 1) = -1;
  const std::vector<double> t{1, -1, 1, -1};
  for (bool online : {false, true}) {
    BpConfig bp;
    bp.seed = 77;
    bp.max_epochs = 200;
    bp.online = online;
    const auto a = train_bp(net, bp, raw, t);
    const auto b = train_bp(net, bp, raw, t);
    EXPECT_EQ(a.history, b.history);
    EXPECT_EQ(a.params, b.params);
  }
}

TEST(TrainBp, DivergenceReportsEpoch) {
  const Network net(NetworkConfig::flnn(1, 1));
  BpConfig bp;
  bp.learning_rate = std::numeric_limits<double>::infinity();
  bp.momentum = 0.0;
  bp.init_low = bp.init_high = 0.0;
  try {
    train_bp(net, bp, column({1.0, -1.0}), {1.0, 1.0});
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(TrainBp, RejectsInvalidConfigAndData) {
  const Network net(NetworkConfig::flnn(1, 1));
  BpConfig bp;
  bp.momentum = 1.0;
  EXPECT_THROW(train_bp(net, bp, column({1.0}), {1.0}), ConfigError);
  EXPECT_THROW(train_bp(net, BpConfig{}, Matrix(), {}), InputError);
  EXPECT_THROW(train_bp(net, BpConfig{}, column({1.0, 2.0}), {1.0}), InputError);
}
