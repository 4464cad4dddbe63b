#include <gtest/gtest.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "flnn/error.hpp"
#include "flnn/kernels.hpp"
#include "flnn/rng.hpp"

using namespace flnn;

namespace {

struct Case {
  Network net;
  Matrix rows;
  std::vector<double> targets;
  std::vector<double> params;
};

Case random_case(Rng& rng, bool mlp, std::size_t nrows) {
  const std::size_t n = 2 + rng.below(8);
  Network net(mlp ? NetworkConfig::mlp(n, 1 + rng.below(9)) : NetworkConfig::flnn(n, 2));
  Matrix raw(nrows, n);
  std::vector<double> t(nrows);
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < n; ++c) raw(r, c) = rng.uniform(-1.0, 1.0);
    t[r] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  std::vector<double> p(net.param_count());
  for (double& v : p) v = rng.uniform(-1.0, 1.0);
  Matrix rows = net.prepare(raw);
  return Case{std::move(net), std::move(rows), std::move(t), std::move(p)};
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

}  // namespace

TEST(Kernels, OpenMpMatchesSerialReference) {
  Rng rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t nrows = 1 + rng.below(500);
    auto c = random_case(rng, trial % 2, nrows);
    EXPECT_LT(rel_diff(kernels::serial::mse(c.net, c.params, c.rows, c.targets),
                       kernels::omp::mse(c.net, c.params, c.rows, c.targets)),
              1e-13);
    std::vector<double> gs(c.params.size()), go(c.params.size());
    const double ms = kernels::serial::mse_gradient(c.net, c.params, c.rows, c.targets, gs);
    const double mo = kernels::omp::mse_gradient(c.net, c.params, c.rows, c.targets, go);
    EXPECT_LT(rel_diff(ms, mo), 1e-13);
    for (std::size_t i = 0; i < gs.size(); ++i) EXPECT_NEAR(gs[i], go[i], 1e-13 * (1 + std::fabs(gs[i])));
    std::vector<double> ys(nrows), yo(nrows);
    kernels::serial::outputs(c.net, c.params, c.rows, ys);
    kernels::omp::outputs(c.net, c.params, c.rows, yo);
    EXPECT_EQ(ys, yo);
  }
}

TEST(Kernels, GradientKernelMseEqualsMseKernel) {
  Rng rng(11);
  auto c = random_case(rng, true, 77);
  std::vector<double> g(c.params.size());
  EXPECT_EQ(kernels::serial::mse_gradient(c.net, c.params, c.rows, c.targets, g),
            kernels::serial::mse(c.net, c.params, c.rows, c.targets));
}

TEST(Kernels, OpenMpResultIndependentOfThreadCount) {
#ifdef _OPENMP
  Rng rng(12);
  auto c = random_case(rng, true, 1000);
  std::vector<double> g1(c.params.size()), g4(c.params.size());
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double m1 = kernels::omp::mse_gradient(c.net, c.params, c.rows, c.targets, g1);
  omp_set_num_threads(4);
  const double m4 = kernels::omp::mse_gradient(c.net, c.params, c.rows, c.targets, g4);
  omp_set_num_threads(saved);
  EXPECT_EQ(m1, m4);
  EXPECT_EQ(g1, g4);
#else
  GTEST_SKIP() << "built without OpenMP";
#endif
}

TEST(Kernels, ShapeErrors) {
  Rng rng(13);
  auto c = random_case(rng, false, 10);
  std::vector<double> short_targets(9);
  EXPECT_THROW(kernels::serial::mse(c.net, c.params, c.rows, short_targets), InputError);
  EXPECT_THROW(kernels::omp::mse(c.net, std::vector<double>(2), c.rows, c.targets), InputError);
  EXPECT_THROW(kernels::serial::mse(c.net, c.params, Matrix(), {}), InputError);
}
