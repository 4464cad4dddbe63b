#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flnn {

/// How product terms pick their factor indices. Only strictly increasing
/// index tuples (x_i x_j with i < j) are implemented; repeated-index variants
/// (which would add squares) slot in here.
enum class IndexPolicy { distinct_indices };

/// Tensor-model functional expansion: the raw inputs followed by every product
/// of 2..order distinct inputs.
///
/// Output layout is fixed: all order-1 terms in index order, then the order-2
/// terms in lexicographic order of (i, j), then order-3 terms (i, j, k), and so
/// on. For input_dim = 3, order = 2 this gives
/// [x0, x1, x2, x0*x1, x0*x2, x1*x2].
///
/// The expanded width is sum_{r=1..order} C(input_dim, r), which grows
/// combinatorially; order 2 on 9 inputs already gives 45 terms.
class Expansion {
 public:
  /// Throws InputError if input_dim < 1 or order < 1.
  Expansion(std::size_t input_dim, std::size_t order,
            IndexPolicy policy = IndexPolicy::distinct_indices);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t order() const noexcept { return order_; }
  IndexPolicy policy() const noexcept { return policy_; }

  /// Number of enhanced features, excluding bias.
  std::size_t expanded_dim() const noexcept { return expanded_dim_; }

  std::vector<double> expand(std::span<const double> x) const;

  /// Writes expanded_dim() terms into `out`.
  void expand_into(std::span<const double> x, std::span<double> out) const;

  /// Index tuple of every product term of order >= 2, in output order.
  const std::vector<std::vector<std::size_t>>& product_terms() const noexcept {
    return terms_;
  }

 private:
  std::size_t input_dim_;
  std::size_t order_;
  IndexPolicy policy_;
  std::size_t expanded_dim_;
  std::vector<std::vector<std::size_t>> terms_;
};

/// sum_{r=1..order} C(input_dim, r) under the distinct-index policy.
std::size_t expanded_dim(std::size_t input_dim, std::size_t order);

}  // namespace flnn
