#include "gsc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {

std::string_view to_string(Symmetry symmetry) {
  return symmetry == Symmetry::None ? "none" : "orthant";
}

Symmetry parse_symmetry(std::string_view text) {
  if (text == "none") return Symmetry::None;
  if (text == "orthant") return Symmetry::Orthant;
  throw ParameterError("unknown symmetry: " + std::string(text));
}

void OptimizerConfig::validate() const {
  if (!(delta0 > 0.0)) throw ParameterError("OptimizerConfig: delta0 must be positive");
  if (!(0.0 < shrink_thresh && shrink_thresh < grow_thresh && grow_thresh < 1.0)) {
    throw ParameterError("OptimizerConfig: need 0 < shrink_thresh < grow_thresh < 1");
  }
  if (!(stop_delta > 0.0 && stop_delta < delta0)) {
    throw ParameterError("OptimizerConfig: need 0 < stop_delta < delta0");
  }
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0) || !(grow_factor >= 1.0)) {
    throw ParameterError("OptimizerConfig: invalid radius update factors");
  }
  if (!(max_delta_factor >= 1.0)) throw ParameterError("OptimizerConfig: max_delta_factor < 1");
  if (max_iters < 0 || cg_max_iters < 0) throw ParameterError("OptimizerConfig: negative limit");
}

namespace {

// Positive root of ||z + tau d|| = delta (z strictly inside the region).
double boundary_step(const Eigen::VectorXd& z, const Eigen::VectorXd& d, double delta) {
  const double a = d.squaredNorm();
  const double b = 2.0 * z.dot(d);
  const double c = z.squaredNorm() - delta * delta;
  const double root = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
  return b <= 0.0 ? (-b + root) / (2.0 * a) : (-2.0 * c) / (b + root);
}

Eigen::VectorXd clip_to_radius(Eigen::VectorXd s, double delta) {
  double norm = s.norm();
  if (norm > delta) {
    s *= delta / norm;
    while (s.norm() > delta) s *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
  }
  return s;
}

}  // namespace

Eigen::VectorXd steihaug_cg(const Eigen::MatrixXd& B, const Eigen::VectorXd& g, double delta,
                            double cg_tol, int cg_max_iters) {
  if (!(delta > 0.0)) throw ParameterError("steihaug_cg: delta must be positive");
  const Eigen::Index n = g.size();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  const double g_norm = g.norm();
  if (g_norm == 0.0) return z;

  const double tol = cg_tol * g_norm;
  const int max_iters = cg_max_iters > 0 ? cg_max_iters : static_cast<int>(2 * n);
  Eigen::VectorXd r = g;
  Eigen::VectorXd d = -r;
  double r_sq = r.squaredNorm();

  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd Bd = B * d;
    const double curvature = d.dot(Bd);
    if (curvature <= 0.0) {
      return clip_to_radius(z + boundary_step(z, d, delta) * d, delta);
    }
    const double alpha = r_sq / curvature;
    Eigen::VectorXd z_next = z + alpha * d;
    if (z_next.norm() >= delta) {
      return clip_to_radius(z + boundary_step(z, d, delta) * d, delta);
    }
    r += alpha * Bd;
    const double r_sq_next = r.squaredNorm();
    z = std::move(z_next);
    if (std::sqrt(r_sq_next) <= tol) break;
    d = -r + (r_sq_next / r_sq) * d;
    r_sq = r_sq_next;
  }
  return z;
}

bool sr1_update(Eigen::MatrixXd& B, const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                double skip_tol) {
  const Eigen::VectorXd v = y - B * s;
  const double denom = v.dot(s);
  if (std::abs(denom) < skip_tol * s.norm() * v.norm() || denom == 0.0) return false;
  const Eigen::Index n = B.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) B(i, j) += v(i) * v(j) / denom;
  }
  return true;
}

TrustRegionResult minimize_trust_region(const GradientObjective& objective, Eigen::VectorXd x0,
                                        const OptimizerConfig& cfg) {
  cfg.validate();
  TrustRegionResult out;
  TrustRegionState& st = out.state;
  const Eigen::Index n = x0.size();
  st.x = std::move(x0);
  st.g.resize(n);
  st.f = objective(st.x, st.g);
  out.trace.n_objective_evals = 1;
  if (!std::isfinite(st.f)) throw DomainError("minimize_trust_region: non-finite start value");
  st.B = Eigen::MatrixXd::Identity(n, n);
  st.delta = cfg.delta0;
  const double max_delta = cfg.max_delta_factor * cfg.delta0;

  Eigen::VectorXd g_trial(n);
  while (st.iter < cfg.max_iters && st.delta >= cfg.stop_delta) {
    const Eigen::VectorXd s = steihaug_cg(st.B, st.g, st.delta, cfg.cg_tol, cfg.cg_max_iters);
    const double predicted = -(st.g.dot(s) + 0.5 * s.dot(st.B * s));
    const Eigen::VectorXd x_trial = st.x + s;

    bool feasible = true;
    double f_trial = 0.0;
    try {
      f_trial = objective(x_trial, g_trial);
      feasible = std::isfinite(f_trial) && g_trial.allFinite();
    } catch (const DomainError&) {
      feasible = false;
    }
    ++out.trace.n_objective_evals;

    double rho = -std::numeric_limits<double>::infinity();
    if (feasible && predicted >= cfg.min_predicted_reduction) rho = (st.f - f_trial) / predicted;

    if (feasible && s.squaredNorm() > 0.0) {
      if (!sr1_update(st.B, s, g_trial - st.g, cfg.sr1_skip_tol)) ++out.trace.sr1_skipped;
    }

    IterationRecord rec;
    rec.iter = st.iter;
    rec.delta = st.delta;
    rec.step_norm = s.norm();
    rec.rho = rho;
    rec.accepted = rho > 0.0;
    if (rec.accepted) {
      st.x = x_trial;
      st.f = f_trial;
      st.g = g_trial;
    }
    if (rho < cfg.shrink_thresh) {
      st.delta *= cfg.shrink_factor;
    } else if (rho > cfg.grow_thresh) {
      st.delta = std::min(st.delta * cfg.grow_factor, max_delta);
    }
    ++st.iter;

    rec.f = st.f;
    rec.grad_norm = st.g.norm();
    rec.n_objective_evals = out.trace.n_objective_evals;
    out.trace.records.push_back(rec);
  }
  return out;
}

}  // namespace gsc
