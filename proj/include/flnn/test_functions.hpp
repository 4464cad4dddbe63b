#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>

#include "flnn/abc.hpp"

namespace flnn::test_functions {

// Standard minimisation benchmarks; all have minimum 0.

inline double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

/// Minimum at (1, ..., 1).
inline double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

inline double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

inline std::optional<Objective> by_name(std::string_view name) {
  if (name == "sphere") return Objective(sphere);
  if (name == "rosenbrock") return Objective(rosenbrock);
  if (name == "rastrigin") return Objective(rastrigin);
  return std::nullopt;
}

}  // namespace flnn::test_functions
