#include "gsc/grad.hpp"

#include <algorithm>
#include <cmath>

#include "gsc/errors.hpp"

namespace gsc {

ObjectiveGradient metric_gradient(const Constellation& c, double sigma_sq, const GhqGrid& grid,
                                  Metric metric) {
  auto pass = kernel_pass(c, sigma_sq, grid, {metric, true, false});
  return {pass.value, std::move(pass.gradient)};
}

namespace {

void require_normalized(const Constellation& c) {
  if (std::abs(c.mean_power() - 1.0) > 1e-9) {
    throw DomainError("gradient: constellation is not normalized; call normalize() first");
  }
}

}  // namespace

ObjectiveGradient mi_gradient(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid) {
  require_normalized(c);
  return metric_gradient(c, ch.sigma_sq, grid, Metric::MI);
}

ObjectiveGradient gmi_gradient(const Constellation& c, const AwgnChannel& ch,
                               const GhqGrid& grid) {
  require_normalized(c);
  return metric_gradient(c, ch.sigma_sq, grid, Metric::GMI);
}

NormalizationJacobian::NormalizationJacobian(std::span<const double> x, int n_pairs)
    : x_(x.begin(), x.end()) {
  if (n_pairs < 1 || x.size() % (2 * n_pairs) != 0) {
    throw ParameterError("NormalizationJacobian: expects rows of 2N coordinates");
  }
  for (double v : x_) norm_sq_ += v * v;
  if (!(norm_sq_ > 0.0)) throw DomainError("NormalizationJacobian: constellation has zero norm");
  const double rows = static_cast<double>(x.size() / (2 * n_pairs));
  const double k = std::sqrt(1.0 / (rows * n_pairs));
  scale_ = 1.0 / (k * norm_sq_ * std::sqrt(norm_sq_));
}

NormalizationJacobian::NormalizationJacobian(const Constellation& c)
    : NormalizationJacobian(c.coords(), c.n_pairs()) {}

std::vector<double> NormalizationJacobian::apply(std::span<const double> v) const {
  if (v.size() != x_.size()) throw DimensionError("NormalizationJacobian: size mismatch");
  double inner = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) inner += x_[k] * v[k];
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = scale_ * (norm_sq_ * v[k] - x_[k] * inner);
  return out;
}

NonlinearMapJacobian::NonlinearMapJacobian(std::span<const double> u, double c)
    : u_(u.begin(), u.end()), grad_scale_(u.size(), 0.0) {
  if (u.empty() || u.size() % 2 != 0) {
    throw ParameterError("NonlinearMapJacobian: expects rows of two coordinates");
  }
  const std::size_t rows = u.size() / 2;
  double s2 = 0.0;
  double s4 = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double a = u[2 * i] * u[2 * i] + u[2 * i + 1] * u[2 * i + 1];
    s2 += a;
    s4 += a * a;
  }
  if (!(s2 > 0.0)) throw DomainError("NonlinearMapJacobian: zero signal power");
  const double M = static_cast<double>(rows);
  phi_ = M * s4 / (s2 * s2) - 2.0;
  const double base = 1.0 + c * phi_;
  if (!(base > 0.0)) throw DomainError("nonlinear map: 1 + c*phi must be positive");
  scale_ = std::pow(base, -1.0 / 6.0);

  // d phi / d u_i = 4 M u_i (|u_i|^2 S2 - S4) / S2^3
  const double ds_dphi = -(c / 6.0) * std::pow(base, -7.0 / 6.0);
  const double s2_cubed = s2 * s2 * s2;
  for (std::size_t i = 0; i < rows; ++i) {
    const double a = u[2 * i] * u[2 * i] + u[2 * i + 1] * u[2 * i + 1];
    const double f = ds_dphi * 4.0 * M * (a * s2 - s4) / s2_cubed;
    grad_scale_[2 * i] = f * u[2 * i];
    grad_scale_[2 * i + 1] = f * u[2 * i + 1];
  }
}

std::vector<double> NonlinearMapJacobian::apply(std::span<const double> v) const {
  if (v.size() != u_.size()) throw DimensionError("NonlinearMapJacobian: size mismatch");
  double inner = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) inner += grad_scale_[k] * v[k];
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = scale_ * v[k] + u_[k] * inner;
  return out;
}

std::vector<double> NonlinearMapJacobian::apply_transpose(std::span<const double> g) const {
  if (g.size() != u_.size()) throw DimensionError("NonlinearMapJacobian: size mismatch");
  double inner = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) inner += u_[k] * g[k];
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = scale_ * g[k] + grad_scale_[k] * inner;
  return out;
}

ObjectiveGradient compose_awgn_objective(const Constellation& raw, const AwgnChannel& ch,
                                         const GhqGrid& grid, Metric metric) {
  const Constellation u = normalize(raw);
  ObjectiveGradient inner = metric_gradient(u, ch.sigma_sq, grid, metric);
  return {inner.value, NormalizationJacobian(raw).apply(inner.grad)};
}

ObjectiveGradient compose_nonlinear_objective(const Constellation& raw, const FibreModel& fibre,
                                              const GhqGrid& grid, Metric metric) {
  if (raw.n_pairs() != 1) {
    throw UnsupportedDimensionError(
        "nonlinear objective: the kurtosis model is defined for one pair only");
  }
  fibre.validate();
  const Constellation u = normalize(raw);
  const NonlinearMapJacobian jn(u.coords(), fibre.c);
  const Constellation n = u.scaled(jn.scale());
  const double sigma_sq = std::pow(10.0, -fibre.snr_gaussian_db / 10.0);

  ObjectiveGradient inner = metric_gradient(n, sigma_sq, grid, metric);
  const auto g_u = jn.apply_transpose(inner.grad);
  return {inner.value, NormalizationJacobian(raw).apply(g_u)};
}

std::vector<double> fd_gradient(const ScalarFunction& objective, std::span<const double> x,
                                double step) {
  if (!(step > 0.0)) throw ParameterError("fd_gradient: step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    probe[k] = x[k] + step;
    const double plus = objective(probe);
    probe[k] = x[k] - step;
    const double minus = objective(probe);
    probe[k] = x[k];
    out[k] = (plus - minus) / (2.0 * step);
  }
  return out;
}

double relative_linf_error(std::span<const double> analytic, std::span<const double> reference,
                           double floor) {
  if (analytic.size() != reference.size()) {
    throw DimensionError("relative_linf_error: size mismatch");
  }
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    diff = std::max(diff, std::abs(analytic[k] - reference[k]));
    ref = std::max(ref, std::abs(reference[k]));
  }
  return diff / std::max(ref, floor);
}

}  // namespace gsc
