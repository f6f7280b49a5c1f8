#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gsc/air.hpp"
#include "gsc/constellation.hpp"
#include "gsc/fibre.hpp"
#include "gsc/ghq.hpp"

namespace gsc {

/// Objective value (bits per symbol) and its gradient, row-major M x 2N.
struct ObjectiveGradient {
  double value = 0.0;
  std::vector<double> grad;
};

/// Analytic MI gradient with respect to the symbol coordinates.
ObjectiveGradient mi_gradient(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid);

/// Analytic GMI gradient with respect to the symbol coordinates.
ObjectiveGradient gmi_gradient(const Constellation& c, const AwgnChannel& ch,
                               const GhqGrid& grid);

/// Jacobian of the power normalization u(x) = x / (sqrt(1/(MN)) ||x||_F).
///
/// J_u = (||x||^2 I - x x^T) / (sqrt(1/(MN)) ||x||^3): a scaled identity
/// minus a rank-one term. It is symmetric, so apply() also serves as the
/// transpose. The constellation direction x lies in its null space.
class NormalizationJacobian {
 public:
  explicit NormalizationJacobian(std::span<const double> x, int n_pairs);
  explicit NormalizationJacobian(const Constellation& c);

  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::vector<double> x_;
  double norm_sq_ = 0.0;
  double scale_ = 0.0;  // 1 / (sqrt(1/(MN)) ||x||^3)
};

/// Jacobian of the kurtosis-dependent amplitude map n(u) = u (1 + c Phi(u))^(-1/6)
/// for one-pair constellations: s I + u (grad s)^T.
class NonlinearMapJacobian {
 public:
  NonlinearMapJacobian(std::span<const double> u, double c);

  double scale() const noexcept { return scale_; }
  double kurtosis() const noexcept { return phi_; }

  std::vector<double> apply(std::span<const double> v) const;
  std::vector<double> apply_transpose(std::span<const double> g) const;

 private:
  std::vector<double> u_;
  std::vector<double> grad_scale_;  // d s / d u
  double phi_ = 0.0;
  double scale_ = 1.0;
};

/// Metric value and gradient at the given (possibly unnormalized) points.
ObjectiveGradient metric_gradient(const Constellation& c, double sigma_sq, const GhqGrid& grid,
                                  Metric metric);

/// o(x) = f(u(x)), gradient J_u^T grad f. Invariant to input scaling.
ObjectiveGradient compose_awgn_objective(const Constellation& raw, const AwgnChannel& ch,
                                         const GhqGrid& grid, Metric metric);

/// o(x) = f(n(u(x))) at the Gaussian-signal SNR of the fibre model, so the
/// effective SNR follows the kurtosis of u(x). One pair only.
ObjectiveGradient compose_nonlinear_objective(const Constellation& raw, const FibreModel& fibre,
                                              const GhqGrid& grid, Metric metric);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences (g(x + h e_k) - g(x - h e_k)) / 2h for every coordinate.
std::vector<double> fd_gradient(const ScalarFunction& objective, std::span<const double> x,
                                double step);

/// ||a - b||_inf / ||b||_inf, with the denominator floored at `floor`.
double relative_linf_error(std::span<const double> analytic, std::span<const double> reference,
                           double floor = 1e-12);

}  // namespace gsc
