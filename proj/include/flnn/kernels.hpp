#pragma once

// Batch evaluation kernels over a prepared design matrix.
//
// Two implementations share one contract:
//   serial::  plain sequential loops; the reference the tests check against.
//   omp::     OpenMP data-parallel loops over fixed-size row blocks. Block
//             partial sums are combined in block order, so results do not
//             depend on the thread count or schedule. They can differ from
//             serial:: in the last few ulps because the summation order
//             differs.
//
// All kernels take rows prepared by Network::prepare() and targets in {-1, +1}.

#include <cstddef>
#include <span>

#include "flnn/matrix.hpp"
#include "flnn/models.hpp"

namespace flnn::kernels {

enum class Backend { serial, openmp };

/// Rows per block in the OpenMP kernels.
inline constexpr std::size_t kBlockRows = 32;

namespace serial {
void outputs(const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out);
double mse(const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets);
/// Writes the gradient of the MSE into `grad` (overwritten) and returns the MSE.
double mse_gradient(const Network& net, std::span<const double> params, const Matrix& rows,
                    std::span<const double> targets, std::span<double> grad);
}  // namespace serial

namespace omp {
void outputs(const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out);
double mse(const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets);
double mse_gradient(const Network& net, std::span<const double> params, const Matrix& rows,
                    std::span<const double> targets, std::span<double> grad);
}  // namespace omp

double mse(Backend b, const Network& net, std::span<const double> params, const Matrix& rows,
           std::span<const double> targets);
double mse_gradient(Backend b, const Network& net, std::span<const double> params,
                    const Matrix& rows, std::span<const double> targets, std::span<double> grad);
void outputs(Backend b, const Network& net, std::span<const double> params, const Matrix& rows,
             std::span<double> out);

/// Number of OpenMP threads available to the kernels (1 without OpenMP).
int max_threads();

/// True inside an active parallel region. Kernels called from one (e.g. a
/// protocol trial) run on the calling thread.
bool in_parallel();

}  // namespace flnn::kernels
