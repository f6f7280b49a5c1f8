#include "gsc/shaping.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "gsc/errors.hpp"
#include "gsc/symmetry.hpp"

namespace gsc {

ObjectiveGradient ShapingObjective::operator()(const Constellation& raw) const {
  if (const auto* awgn = std::get_if<AwgnChannel>(&channel)) {
    return compose_awgn_objective(raw, *awgn, grid, metric);
  }
  return compose_nonlinear_objective(raw, std::get<FibreModel>(channel), grid, metric);
}

double ShapingObjective::value(const Constellation& raw) const {
  const Constellation u = normalize(raw);
  const KernelOptions opt{metric, false, false};
  if (const auto* awgn = std::get_if<AwgnChannel>(&channel)) {
    return kernel_pass(u, awgn->sigma_sq, grid, opt).value;
  }
  const auto& fibre = std::get<FibreModel>(channel);
  fibre.validate();
  const double scale = nonlinear_scale(fibre.c, excess_kurtosis(u));
  const double sigma_sq = std::pow(10.0, -fibre.snr_gaussian_db / 10.0);
  return kernel_pass(u.scaled(scale), sigma_sq, grid, opt).value;
}

OptimizeResult optimize(const Constellation& start, const ShapingObjective& objective,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  const Constellation x0 = normalize(start);

  std::optional<OrthantFold> fold;
  if (cfg.symmetry == Symmetry::Orthant) fold.emplace(x0);

  auto rebuild = [&](const Eigen::VectorXd& v) {
    if (fold) return fold->reconstruct(v);
    return x0.with_coords(std::vector<double>(v.data(), v.data() + v.size()));
  };
  Eigen::VectorXd v0 = fold ? fold->free_vars()
                            : Eigen::Map<const Eigen::VectorXd>(
                                  x0.coords().data(), static_cast<Eigen::Index>(x0.coords().size()));

  // Minimize the negated rate.
  const GradientObjective fn = [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
    const Constellation c = rebuild(v);
    const ObjectiveGradient og = objective(c);
    if (fold) {
      grad = -fold->fold_gradient(og.grad);
    } else {
      grad = -Eigen::Map<const Eigen::VectorXd>(og.grad.data(),
                                                static_cast<Eigen::Index>(og.grad.size()));
    }
    return -og.value;
  };

  TrustRegionResult tr = minimize_trust_region(fn, v0, cfg);
  const double start_value =
      tr.trace.records.empty() ? -tr.state.f : objective.value(rebuild(v0));
  return OptimizeResult{normalize(rebuild(tr.state.x)), -tr.state.f, start_value,
                        std::move(tr.trace)};
}

MultiStartResult multi_start(std::span<const Constellation> starts,
                             const ShapingObjective& objective, const OptimizerConfig& cfg) {
  if (starts.empty()) throw ParameterError("multi_start: need at least one start");
  std::optional<OptimizeResult> best;
  std::size_t best_index = 0;
  std::vector<std::optional<double>> values(starts.size());
  std::vector<std::string> warnings;

  for (std::size_t k = 0; k < starts.size(); ++k) {
    try {
      OptimizeResult r = optimize(starts[k], objective, cfg);
      values[k] = r.value;
      if (!best || r.value > best->value) {
        best = std::move(r);
        best_index = k;
      }
    } catch (const std::exception& e) {
      warnings.push_back("start " + std::to_string(k) + " skipped: " + e.what());
    }
  }
  if (!best) {
    std::string msg = "multi_start: every start failed";
    for (const auto& w : warnings) msg += "; " + w;
    throw DomainError(msg);
  }
  return MultiStartResult{std::move(*best), best_index, std::move(values), std::move(warnings)};
}

}  // namespace gsc
