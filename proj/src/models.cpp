#include "flnn/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "flnn/error.hpp"

namespace flnn {

namespace {

// tanh saturates to exactly +-1 in double precision for |a| > ~19; keep the
// output strictly inside the open interval.
constexpr double kOutputBound = 1.0 - std::numeric_limits<double>::epsilon() / 2;

inline double bounded_tanh(double a) noexcept {
  return std::clamp(std::tanh(a), -kOutputBound, kOutputBound);
}

Expansion make_expansion(const NetworkConfig& c) {
  if (c.input_dim < 1) throw InputError("network input_dim must be >= 1");
  return c.kind == NetworkKind::flnn ? Expansion(c.input_dim, c.order) : Expansion(c.input_dim, 1);
}

}  // namespace

NetworkConfig NetworkConfig::flnn(std::size_t input_dim, std::size_t order) {
  NetworkConfig c;
  c.kind = NetworkKind::flnn;
  c.input_dim = input_dim;
  c.order = order;
  c.hidden_dim = 0;
  return c;
}

NetworkConfig NetworkConfig::mlp(std::size_t input_dim, std::size_t hidden_dim) {
  NetworkConfig c;
  c.kind = NetworkKind::mlp;
  c.input_dim = input_dim;
  c.order = 1;
  c.hidden_dim = hidden_dim;
  return c;
}

std::size_t param_count(const NetworkConfig& c) {
  if (c.kind == NetworkKind::flnn) return expanded_dim(c.input_dim, c.order) + 1;
  return c.input_dim * c.hidden_dim + c.hidden_dim + c.hidden_dim + 1;
}

Network::Network(const NetworkConfig& config)
    : config_(config), expansion_(make_expansion(config)) {
  if (config_.kind == NetworkKind::mlp) {
    if (config_.hidden_dim < 1) throw InputError("mlp hidden_dim must be >= 1");
    feature_dim_ = config_.input_dim;
  } else {
    config_.hidden_dim = 0;
    feature_dim_ = expansion_.expanded_dim();
  }
  param_count_ = flnn::param_count(config_);
}

std::string Network::structure() const {
  if (config_.kind == NetworkKind::flnn) return std::to_string(feature_dim_) + "-1";
  return std::to_string(config_.input_dim) + "-" + std::to_string(config_.hidden_dim) + "-1";
}

Matrix Network::prepare(const Matrix& raw) const {
  if (raw.cols() != config_.input_dim && !raw.empty()) {
    throw InputError("prepare: expected " + std::to_string(config_.input_dim) +
                     " features, got " + std::to_string(raw.cols()));
  }
  if (config_.kind == NetworkKind::mlp) return raw;
  Matrix out(raw.rows(), feature_dim_);
  for (std::size_t r = 0; r < raw.rows(); ++r) expansion_.expand_into(raw.row(r), out.row(r));
  return out;
}

void Network::check_params(std::span<const double> params) const {
  if (params.size() != param_count_) {
    throw InputError("expected " + std::to_string(param_count_) + " parameters, got " +
                     std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i])) {
      throw InputError("parameter " + std::to_string(i) + " is not finite");
    }
  }
}

double Network::forward(std::span<const double> params, std::span<const double> x) const {
  check_params(params);
  if (x.size() != config_.input_dim) {
    throw InputError("forward: expected " + std::to_string(config_.input_dim) +
                     " features, got " + std::to_string(x.size()));
  }
  if (config_.kind == NetworkKind::mlp) return forward_prepared(params, x);
  std::vector<double> row(feature_dim_);
  expansion_.expand_into(x, row);
  return forward_prepared(params, row);
}

double Network::forward_prepared(std::span<const double> params,
                                 std::span<const double> row) const noexcept {
  const std::size_t n = feature_dim_;
  if (config_.kind == NetworkKind::flnn) {
    double a = params[n];
    for (std::size_t i = 0; i < n; ++i) a += params[i] * row[i];
    return bounded_tanh(a);
  }
  const std::size_t h = config_.hidden_dim;
  const double* w1 = params.data();
  const double* b1 = w1 + h * n;
  const double* w2 = b1 + h;
  double a = w2[h];
  for (std::size_t k = 0; k < h; ++k) {
    double z = b1[k];
    const double* wk = w1 + k * n;
    for (std::size_t i = 0; i < n; ++i) z += wk[i] * row[i];
    a += w2[k] * std::tanh(z);
  }
  return bounded_tanh(a);
}

double Network::accumulate_gradient(std::span<const double> params, std::span<const double> row,
                                    double target, std::span<double> grad,
                                    std::span<double> scratch) const noexcept {
  const std::size_t n = feature_dim_;
  if (config_.kind == NetworkKind::flnn) {
    const double y = forward_prepared(params, row);
    const double err = target - y;
    // d(t - y)^2 / da = -2 (t - y)(1 - y^2)
    const double delta = -2.0 * err * (1.0 - y * y);
    for (std::size_t i = 0; i < n; ++i) grad[i] += delta * row[i];
    grad[n] += delta;
    return err * err;
  }
  const std::size_t h = config_.hidden_dim;
  const double* w1 = params.data();
  const double* b1 = w1 + h * n;
  const double* w2 = b1 + h;
  double a = w2[h];
  for (std::size_t k = 0; k < h; ++k) {
    double z = b1[k];
    const double* wk = w1 + k * n;
    for (std::size_t i = 0; i < n; ++i) z += wk[i] * row[i];
    scratch[k] = std::tanh(z);
    a += w2[k] * scratch[k];
  }
  const double y = bounded_tanh(a);
  const double err = target - y;
  const double delta = -2.0 * err * (1.0 - y * y);

  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + h * n;
  double* g_w2 = g_b1 + h;
  for (std::size_t k = 0; k < h; ++k) {
    const double hk = scratch[k];
    g_w2[k] += delta * hk;
    const double dk = delta * w2[k] * (1.0 - hk * hk);
    g_b1[k] += dk;
    double* gk = g_w1 + k * n;
    for (std::size_t i = 0; i < n; ++i) gk[i] += dk * row[i];
  }
  g_w2[h] += delta;
  return err * err;
}

std::string params_to_json(const ParamVector& params) {
  // 17 significant digits round-trip doubles exactly.
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ", ";
    os << params.values[i];
  }
  os << "]\n";
  return os.str();
}

ParamVector params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw InputError("model file must hold a JSON array of numbers");
  ParamVector p;
  p.values.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError("model file must hold a JSON array of numbers");
    p.values.push_back(v.get<double>());
  }
  return p;
}

void save_params(const ParamVector& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << params_to_json(params);
  if (!out) throw IoError("failed writing " + path.string());
}

ParamVector load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_json(ss.str());
}

}  // namespace flnn
