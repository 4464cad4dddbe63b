#include "flnn/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "flnn/error.hpp"

namespace flnn::kernels {

namespace {

void check_shapes(const Network& net, std::span<const double> params, const Matrix& rows,
                  std::size_t targets) {
  if (params.size() != net.param_count()) throw InputError("kernel: parameter count mismatch");
  if (rows.empty()) throw InputError("kernel: empty dataset");
  if (rows.cols() != net.feature_dim()) throw InputError("kernel: row width mismatch");
  if (targets != rows.rows()) throw InputError("kernel: target count mismatch");
}

std::size_t block_count(std::size_t rows) { return (rows + kBlockRows - 1) / kBlockRows; }

}  // namespace

namespace serial {

void outputs(const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out) {
  check_shapes(net, params, rows, out.size());
  for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = net.forward_prepared(params, rows.row(r));
}

double mse(const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets) {
  check_shapes(net, params, rows, targets.size());
  double sum = 0.0;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double e = targets[r] - net.forward_prepared(params, rows.row(r));
    sum += e * e;
  }
  return sum / static_cast<double>(rows.rows());
}

double mse_gradient(const Network& net, std::span<const double> params, const Matrix& rows,
                    std::span<const double> targets, std::span<double> grad) {
  check_shapes(net, params, rows, targets.size());
  if (grad.size() != params.size()) throw InputError("kernel: gradient length mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> scratch(net.scratch_size());
  double sum = 0.0;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    sum += net.accumulate_gradient(params, rows.row(r), targets[r], grad, scratch);
  }
  const double inv = 1.0 / static_cast<double>(rows.rows());
  for (double& g : grad) g *= inv;
  return sum * inv;
}

}  // namespace serial

namespace omp {

void outputs(const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out) {
  check_shapes(net, params, rows, out.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.rows());
#pragma omp parallel for schedule(static) if (!in_parallel())
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        net.forward_prepared(params, rows.row(static_cast<std::size_t>(r)));
  }
}

double mse(const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets) {
  check_shapes(net, params, rows, targets.size());
  const std::size_t nrows = rows.rows();
  const auto nblocks = static_cast<std::ptrdiff_t>(block_count(nrows));
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static) if (!in_parallel())
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t end = std::min(nrows, begin + kBlockRows);
    double s = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const double e = targets[r] - net.forward_prepared(params, rows.row(r));
      s += e * e;
    }
    partial[static_cast<std::size_t>(b)] = s;
  }
  double sum = 0.0;
  for (double s : partial) sum += s;
  return sum / static_cast<double>(nrows);
}

double mse_gradient(const Network& net, std::span<const double> params, const Matrix& rows,
                    std::span<const double> targets, std::span<double> grad) {
  check_shapes(net, params, rows, targets.size());
  if (grad.size() != params.size()) throw InputError("kernel: gradient length mismatch");
  const std::size_t nrows = rows.rows();
  const std::size_t np = params.size();
  const auto nblocks = static_cast<std::ptrdiff_t>(block_count(nrows));
  std::vector<double> partial_grad(static_cast<std::size_t>(nblocks) * np, 0.0);
  std::vector<double> partial_sse(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel if (!in_parallel())
  {
    std::vector<double> scratch(net.scratch_size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const std::size_t begin = bi * kBlockRows;
      const std::size_t end = std::min(nrows, begin + kBlockRows);
      std::span<double> g(partial_grad.data() + bi * np, np);
      double s = 0.0;
      for (std::size_t r = begin; r < end; ++r) {
        s += net.accumulate_gradient(params, rows.row(r), targets[r], g, scratch);
      }
      partial_sse[bi] = s;
    }
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0.0;
  for (std::size_t b = 0; b < static_cast<std::size_t>(nblocks); ++b) {
    sum += partial_sse[b];
    const double* g = partial_grad.data() + b * np;
    for (std::size_t i = 0; i < np; ++i) grad[i] += g[i];
  }
  const double inv = 1.0 / static_cast<double>(nrows);
  for (double& g : grad) g *= inv;
  return sum * inv;
}

}  // namespace omp

double mse(Backend b, const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets) {
  return b == Backend::openmp ? omp::mse(net, params, rows, targets)
                              : serial::mse(net, params, rows, targets);
}

double mse_gradient(Backend b, const Network& net, std::span<const double> params,
                    const Matrix& rows, std::span<const double> targets, std::span<double> grad) {
  return b == Backend::openmp ? omp::mse_gradient(net, params, rows, targets, grad)
                              : serial::mse_gradient(net, params, rows, targets, grad);
}

void outputs(Backend b, const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out) {
  if (b == Backend::openmp) {
    omp::outputs(net, params, rows, out);
  } else {
    serial::outputs(net, params, rows, out);
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace flnn::kernels

namespace flnn::kernels {

bool in_parallel() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

}  // namespace flnn::kernels
