#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsc {

/// One-dimensional Gauss-Hermite rule for the weight exp(-t^2).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order, computed once and cached (thread-safe).
/// Nodes are the eigenvalues of the symmetric Jacobi matrix of the Hermite
/// recurrence, polished by Newton iteration; weights use the Golub-Welsch
/// identity w_i = 1 / sum_k p_k(t_i)^2 with orthonormal p_k.
const HermiteRule& hermite_rule(int order);

/// Tensor-product Gauss-Hermite grid over `dims` real dimensions.
///
/// Tensor weights are the products of the 1-D weights scaled by
/// pi^(-dims/2), so they sum to one and directly give E[g(Z)] for
/// Z ~ N(0, sigma^2/2 I) as sum_k w_k g(sigma t_k).
class GhqGrid {
 public:
  GhqGrid(int order, int dims);

  int order() const noexcept { return order_; }
  int dims() const noexcept { return dims_; }

  std::span<const double> nodes() const noexcept { return rule_->nodes; }
  std::span<const double> weights() const noexcept { return rule_->weights; }

  std::size_t size() const noexcept { return tensor_weights_.size(); }
  std::span<const double> tensor_nodes() const noexcept { return tensor_nodes_; }
  std::span<const double> tensor_node(std::size_t k) const {
    return std::span<const double>(tensor_nodes_).subspan(k * dims_, dims_);
  }
  std::span<const double> tensor_weights() const noexcept { return tensor_weights_; }

 private:
  int order_;
  int dims_;
  const HermiteRule* rule_;
  std::vector<double> tensor_nodes_;
  std::vector<double> tensor_weights_;
};

}  // namespace gsc
