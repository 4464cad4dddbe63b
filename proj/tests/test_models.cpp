#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "flnn/error.hpp"
#include "flnn/models.hpp"
#include "flnn/rng.hpp"
#include "oracles.hpp"

using namespace flnn;

TEST(Models, ParamCountsForBenchmarkArchitectures) {
  EXPECT_EQ(param_count(NetworkConfig::flnn(9, 2)), 46u);
  EXPECT_EQ(param_count(NetworkConfig::flnn(8, 2)), 37u);
  EXPECT_EQ(param_count(NetworkConfig::flnn(6, 2)), 22u);
  EXPECT_EQ(param_count(NetworkConfig::mlp(9, 9)), 100u);
  EXPECT_EQ(param_count(NetworkConfig::mlp(6, 6)), 49u);
  // Layer formula 8*8 + 8 + 8 + 1.
  EXPECT_EQ(param_count(NetworkConfig::mlp(8, 8)), 81u);
}

TEST(Models, StructureStrings) {
  EXPECT_EQ(Network(NetworkConfig::flnn(9, 2)).structure(), "45-1");
  EXPECT_EQ(Network(NetworkConfig::mlp(8, 8)).structure(), "8-8-1");
}

TEST(Models, ZeroFlnnGivesZeroOutput) {
  const Network net(NetworkConfig::flnn(3, 2));
  const ParamVector p(net.param_count());
  EXPECT_EQ(net.forward(p.span(), std::vector<double>{4, -2, 7}), 0.0);
}

TEST(Models, FlnnSingleWeightHandCase) {
  const Network net(NetworkConfig::flnn(3, 2));
  ParamVector p(std::vector<double>{1, 0, 0, 0, 0, 0, 0});
  const double y = net.forward(p.span(), std::vector<double>{0.5, 9, 9});
  EXPECT_NEAR(y, 0.46212, 1e-5);
  EXPECT_DOUBLE_EQ(y, std::tanh(0.5));
}

TEST(Models, MlpBiasOnly) {
  const Network net(NetworkConfig::mlp(2, 2));
  ParamVector p(net.param_count());
  p.values.back() = 3.0;
  EXPECT_NEAR(net.forward(p.span(), std::vector<double>{-5, 8}), 0.99505, 1e-5);
}

TEST(Models, ForwardRejectsBadArguments) {
  const Network net(NetworkConfig::flnn(3, 2));
  ParamVector p(net.param_count());
  EXPECT_THROW(net.forward(p.span(), std::vector<double>{1, 2}), InputError);
  EXPECT_THROW(net.forward(ParamVector(3).span(), std::vector<double>{1, 2, 3}), InputError);
  p.values[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(net.forward(p.span(), std::vector<double>{1, 2, 3}), InputError);
  EXPECT_THROW(Network(NetworkConfig::mlp(3, 0)), InputError);
}

TEST(Models, PredictClassTieIsPositive) {
  EXPECT_EQ(predict_class(0.7), ClassLabel::positive);
  EXPECT_EQ(predict_class(-0.7), ClassLabel::negative);
  EXPECT_EQ(predict_class(0.0), ClassLabel::positive);
}

TEST(ModelsProperty, ForwardMatchesDirectEvaluation) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const bool mlp = trial % 2;
    const std::size_t hidden = 1 + rng.below(5);
    const Network net(mlp ? NetworkConfig::mlp(n, hidden) : NetworkConfig::flnn(n, 1 + rng.below(3)));
    std::vector<double> p(net.param_count()), x(n);
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const double want = mlp ? oracle::mlp_output(p, x, hidden)
                            : oracle::flnn_output(p, oracle::brute_force_expand(x, net.config().order));
    EXPECT_NEAR(net.forward(p, x), want, 1e-12);
  }
}

TEST(ModelsProperty, OutputStrictlyInsideUnitInterval) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Network net(trial % 2 ? NetworkConfig::mlp(4, 3) : NetworkConfig::flnn(4, 2));
    std::vector<double> p(net.param_count()), x(4);
    const double scale = trial < 100 ? 1.0 : 1000.0;  // second half saturates tanh
    for (double& v : p) v = rng.uniform(-scale, scale);
    for (double& v : x) v = rng.uniform(-scale, scale);
    EXPECT_LT(std::fabs(net.forward(p, x)), 1.0);
  }
}

TEST(ModelsProperty, FlnnPreActivationIsLinearInParams) {
  Rng rng(5);
  const Network net(NetworkConfig::flnn(3, 2));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(net.param_count()), b(net.param_count()), x(3);
    for (double& v : a) v = rng.uniform(-0.3, 0.3);
    for (double& v : b) v = rng.uniform(-0.3, 0.3);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const double alpha = rng.uniform(-1.0, 1.0), beta = rng.uniform(-1.0, 1.0);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = alpha * a[i] + beta * b[i];
    const double lhs = std::atanh(net.forward(mix, x));
    const double rhs = alpha * std::atanh(net.forward(a, x)) + beta * std::atanh(net.forward(b, x));
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(ModelsProperty, ParamCountIsTheAcceptedLength) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Network net(trial % 2 ? NetworkConfig::mlp(n, 1 + rng.below(8))
                                : NetworkConfig::flnn(n, 1 + rng.below(3)));
    const std::vector<double> x(n, 0.1);
    EXPECT_NO_THROW(net.forward(std::vector<double>(net.param_count(), 0.1), x));
    EXPECT_THROW(net.forward(std::vector<double>(net.param_count() + 1, 0.1), x), InputError);
  }
}

TEST(Models, ParamsJsonRoundTripIsExact) {
  Rng rng(7);
  ParamVector p(46);
  for (double& v : p.values) v = rng.uniform(-10.0, 10.0);
  EXPECT_EQ(params_from_json(params_to_json(p)), p);
  const auto path = std::filesystem::temp_directory_path() / "flnn_params_test.json";
  save_params(p, path);
  EXPECT_EQ(load_params(path), p);
  std::filesystem::remove(path);
  EXPECT_THROW(params_from_json("{\"a\": 1}"), InputError);
  EXPECT_THROW(params_from_json("[1, \"x\"]"), InputError);
}
