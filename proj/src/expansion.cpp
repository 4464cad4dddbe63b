#include "flnn/expansion.hpp"

#include <string>

#include "flnn/error.hpp"

namespace flnn {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Appends all strictly increasing index tuples of length `r` in lexicographic order.
void append_combinations(std::size_t n, std::size_t r,
                         std::vector<std::vector<std::size_t>>& out) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace

std::size_t expanded_dim(std::size_t input_dim, std::size_t order) {
  std::size_t total = 0;
  for (std::size_t r = 1; r <= order; ++r) total += binomial(input_dim, r);
  return total;
}

Expansion::Expansion(std::size_t input_dim, std::size_t order, IndexPolicy policy)
    : input_dim_(input_dim), order_(order), policy_(policy) {
  if (input_dim < 1) throw InputError("expansion input_dim must be >= 1");
  if (order < 1) throw InputError("expansion order must be >= 1");
  for (std::size_t r = 2; r <= order; ++r) append_combinations(input_dim, r, terms_);
  expanded_dim_ = input_dim + terms_.size();
}

std::vector<double> Expansion::expand(std::span<const double> x) const {
  std::vector<double> out(expanded_dim_);
  expand_into(x, out);
  return out;
}

void Expansion::expand_into(std::span<const double> x, std::span<double> out) const {
  if (x.size() != input_dim_) {
    throw InputError("expand: expected " + std::to_string(input_dim_) + " features, got " +
                     std::to_string(x.size()));
  }
  if (out.size() != expanded_dim_) throw InputError("expand: output span has wrong length");
  std::size_t o = 0;
  for (double v : x) out[o++] = v;
  for (const auto& term : terms_) {
    double p = 1.0;
    for (std::size_t i : term) p *= x[i];
    out[o++] = p;
  }
}

}  // namespace flnn
