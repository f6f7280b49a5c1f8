#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace gsc {

enum class Symmetry { None, Orthant };

std::string_view to_string(Symmetry symmetry);
Symmetry parse_symmetry(std::string_view text);

struct OptimizerConfig {
  double delta0 = 1.0;
  double shrink_thresh = 0.2;
  double grow_thresh = 0.8;
  double shrink_factor = 0.25;
  double grow_factor = 2.0;
  /// Trust radius cap, as a multiple of delta0.
  double max_delta_factor = 10.0;
  double stop_delta = 3e-4;
  int max_iters = 10000;
  double sr1_skip_tol = 1e-8;
  /// Steihaug stops once ||r|| <= cg_tol * ||g||.
  double cg_tol = 1e-8;
  /// 0 selects twice the problem dimension.
  int cg_max_iters = 0;
  /// Steps whose predicted reduction falls below this are rejected.
  double min_predicted_reduction = 1e-15;
  Symmetry symmetry = Symmetry::None;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double f = 0.0;          // objective after the iteration (minimization)
  double grad_norm = 0.0;  // ||g|| after the iteration
  double delta = 0.0;      // trust radius the step was computed with
  double step_norm = 0.0;
  double rho = 0.0;
  bool accepted = false;
  std::size_t n_objective_evals = 0;  // cumulative
};

struct OptTrace {
  std::vector<IterationRecord> records;
  std::size_t n_objective_evals = 0;  // including the initial evaluation
  int sr1_skipped = 0;
};

struct TrustRegionState {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd B;
  double delta = 1.0;
  int iter = 0;
};

/// Value and gradient of a function to minimize. Throwing DomainError marks
/// the point as infeasible; the trust-region loop rejects such trial steps.
using GradientObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Truncated CG for min g^T s + 1/2 s^T B s subject to ||s|| <= delta.
Eigen::VectorXd steihaug_cg(const Eigen::MatrixXd& B, const Eigen::VectorXd& g, double delta,
                            double cg_tol, int cg_max_iters);

/// Symmetric rank-one update in place. Returns false (B untouched) when
/// |(y - Bs)^T s| < skip_tol ||s|| ||y - Bs||.
bool sr1_update(Eigen::MatrixXd& B, const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                double skip_tol);

struct TrustRegionResult {
  TrustRegionState state;
  OptTrace trace;
};

/// SR1 trust-region minimization.
///
/// B starts at the identity and the radius at delta0. Each iteration solves
/// the subproblem with Steihaug-CG, evaluates value and gradient once at the
/// trial point, updates B with y = g(x + s) - g(x), accepts iff rho > 0, and
/// scales the radius by shrink_factor (rho < shrink_thresh) or grow_factor
/// (rho > grow_thresh, capped). Stops when delta < stop_delta or after
/// max_iters iterations.
TrustRegionResult minimize_trust_region(const GradientObjective& objective, Eigen::VectorXd x0,
                                        const OptimizerConfig& cfg);

}  // namespace gsc
