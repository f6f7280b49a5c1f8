#include "gsc/ghq.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {
namespace {

// Orthonormal Hermite polynomials for the weight exp(-t^2):
// p_0 = pi^(-1/4), p_{k+1} = (t p_k sqrt(2) - sqrt(k) p_{k-1}) / sqrt(k+1).
// Returns p_n(t) and p_{n-1}(t); also accumulates sum_{k<n} p_k(t)^2.
struct HermiteEval {
  double pn = 0.0;
  double pn1 = 0.0;
  double sum_sq = 0.0;
};

HermiteEval eval_orthonormal(int n, double t) {
  HermiteEval e;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < n; ++k) {
    e.sum_sq += cur * cur;
    const double next =
        (t * std::sqrt(2.0) * cur - std::sqrt(static_cast<double>(k)) * prev) /
        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  e.pn = cur;
  e.pn1 = prev;
  return e;
}

HermiteRule compute_rule(int order) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DomainError("hermite_rule: eigen-decomposition failed for order " +
                      std::to_string(order));
  }

  HermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double t = solver.eigenvalues()(i);
    // Newton polish on p_n; p_n' = sqrt(2n) p_{n-1}.
    for (int it = 0; it < 3; ++it) {
      const HermiteEval e = eval_orthonormal(order, t);
      const double deriv = std::sqrt(2.0 * order) * e.pn1;
      if (deriv == 0.0) break;
      t -= e.pn / deriv;
    }
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / eval_orthonormal(order, t).sum_sq;
  }
  // Exact symmetry about zero.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    rule.weights[i] = rule.weights[j] = weight;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

const HermiteRule& hermite_rule(int order) {
  if (order < 1 || order > 200) {
    throw ParameterError("hermite_rule: order must be in [1, 200], got " + std::to_string(order));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<HermiteRule>(compute_rule(order));
  return *slot;
}

GhqGrid::GhqGrid(int order, int dims) : order_(order), dims_(dims), rule_(&hermite_rule(order)) {
  if (dims < 1) throw ParameterError("GhqGrid: dims must be >= 1");
  std::size_t count = 1;
  for (int d = 0; d < dims; ++d) {
    count *= static_cast<std::size_t>(order);
    if (count > (std::size_t{1} << 26)) throw ParameterError("GhqGrid: tensor grid too large");
  }

  const double norm = std::pow(std::numbers::pi, -0.5 * dims);
  tensor_nodes_.resize(count * dims);
  tensor_weights_.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    double w = norm;
    for (int d = dims - 1; d >= 0; --d) {
      const std::size_t idx = rest % order;
      rest /= order;
      tensor_nodes_[k * dims + d] = rule_->nodes[idx];
      w *= rule_->weights[idx];
    }
    tensor_weights_[k] = w;
  }
}

}  // namespace gsc
