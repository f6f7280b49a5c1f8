#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gsc/air.hpp"
#include "gsc/constellation.hpp"
#include "gsc/fibre.hpp"
#include "gsc/ghq.hpp"
#include "gsc/grad.hpp"
#include "gsc/optim.hpp"

namespace gsc {

/// The composed objective the optimizer maximizes: MI or GMI after power
/// normalization, either on a fixed-SNR AWGN channel or on the fibre model
/// where the SNR follows the excess kurtosis.
struct ShapingObjective {
  Metric metric = Metric::GMI;
  std::variant<AwgnChannel, FibreModel> channel = AwgnChannel{};
  GhqGrid grid{10, 2};

  ObjectiveGradient operator()(const Constellation& raw) const;
  /// Value only (same kernel pass without the gradient accumulation).
  double value(const Constellation& raw) const;
};

struct OptimizeResult {
  Constellation constellation;  // normalized
  double value = 0.0;           // objective value (bits per symbol)
  double start_value = 0.0;
  OptTrace trace;
};

/// Maximizes the objective from `start` with the SR1 trust-region method.
/// The start is normalized first; with Symmetry::Orthant only the base-orthant
/// points are free (see OrthantFold) and the run starts from the symmetric
/// reconstruction of `start`.
OptimizeResult optimize(const Constellation& start, const ShapingObjective& objective,
                        const OptimizerConfig& cfg);

struct MultiStartResult {
  OptimizeResult best;
  std::size_t best_index = 0;
  /// Final value per start; empty for starts that failed.
  std::vector<std::optional<double>> values;
  std::vector<std::string> warnings;
};

/// Runs optimize on every start and keeps the best (first index wins ties).
/// Failed starts are skipped with a warning; throws if all fail.
MultiStartResult multi_start(std::span<const Constellation> starts,
                             const ShapingObjective& objective, const OptimizerConfig& cfg);

}  // namespace gsc
