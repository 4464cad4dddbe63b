#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "flnn/expansion.hpp"
#include "flnn/matrix.hpp"

namespace flnn {

enum class NetworkKind { flnn, mlp };
enum class Activation { tanh };

/// Architecture descriptor. Output is always a single tanh unit; the MLP
/// hidden layer also uses tanh.
struct NetworkConfig {
  NetworkKind kind = NetworkKind::flnn;
  std::size_t input_dim = 1;
  std::size_t order = 2;       // flnn only
  std::size_t hidden_dim = 0;  // mlp only
  Activation hidden_activation = Activation::tanh;
  Activation output_activation = Activation::tanh;

  static NetworkConfig flnn(std::size_t input_dim, std::size_t order);
  static NetworkConfig mlp(std::size_t input_dim, std::size_t hidden_dim);
};

/// Flat trainable parameters of one network.
///
/// Layout:
///   FLNN: w[0..E) in expansion order, then the output bias.
///   MLP:  W1 (hidden x input, row per hidden unit), b1 (hidden),
///         w2 (hidden), b2.
struct ParamVector {
  std::vector<double> values;

  ParamVector() = default;
  explicit ParamVector(std::vector<double> v) : values(std::move(v)) {}
  explicit ParamVector(std::size_t n, double fill = 0.0) : values(n, fill) {}

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> span() const noexcept { return values; }
  std::span<double> span() noexcept { return values; }
  bool operator==(const ParamVector&) const = default;
};

/// JSON array of numbers, in layout order. Throws IoError / InputError.
void save_params(const ParamVector& params, const std::filesystem::path& path);
ParamVector load_params(const std::filesystem::path& path);
std::string params_to_json(const ParamVector& params);
ParamVector params_from_json(const std::string& text);

/// A configured network. Construction validates the config.
///
/// Training code works on "prepared" rows: the FLNN expansion is fixed, so it
/// is applied once per dataset (see prepare()) and the hot loops only see the
/// enhanced features. For the MLP a prepared row is the raw row.
class Network {
 public:
  explicit Network(const NetworkConfig& config);

  const NetworkConfig& config() const noexcept { return config_; }
  NetworkKind kind() const noexcept { return config_.kind; }
  std::size_t input_dim() const noexcept { return config_.input_dim; }
  std::size_t param_count() const noexcept { return param_count_; }
  /// Width of a prepared row.
  std::size_t feature_dim() const noexcept { return feature_dim_; }
  /// "45-1" for a 9-input 2nd-order FLNN, "9-9-1" for the MLP.
  std::string structure() const;
  const Expansion& expansion() const noexcept { return expansion_; }

  Matrix prepare(const Matrix& raw) const;

  /// Checked evaluation on one raw feature vector. Result in (-1, 1).
  double forward(std::span<const double> params, std::span<const double> x) const;

  /// Unchecked evaluation on one prepared row.
  double forward_prepared(std::span<const double> params,
                          std::span<const double> row) const noexcept;

  /// Adds the gradient of (target - y)^2 with respect to params into `grad`
  /// and returns the squared error. `scratch` needs scratch_size() entries.
  double accumulate_gradient(std::span<const double> params, std::span<const double> row,
                             double target, std::span<double> grad,
                             std::span<double> scratch) const noexcept;
  std::size_t scratch_size() const noexcept { return config_.hidden_dim; }

  /// Throws InputError unless params.size() == param_count() and all finite.
  void check_params(std::span<const double> params) const;

 private:
  NetworkConfig config_;
  Expansion expansion_;
  std::size_t feature_dim_;
  std::size_t param_count_;
};

std::size_t param_count(const NetworkConfig& config);

enum class ClassLabel { negative, positive };

/// Sign threshold at zero; an output of exactly 0 counts as positive.
inline ClassLabel predict_class(double y) noexcept {
  return y >= 0.0 ? ClassLabel::positive : ClassLabel::negative;
}

inline double label_value(ClassLabel c) noexcept {
  return c == ClassLabel::positive ? 1.0 : -1.0;
}

}  // namespace flnn
