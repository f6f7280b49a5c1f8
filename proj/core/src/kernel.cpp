#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "exp_kernel.hpp"
#include "gsc/air.hpp"
#include "gsc/errors.hpp"
#include "gsc/parallel.hpp"

namespace gsc {
namespace {

constexpr std::size_t kMaxBlocks = 64;

struct BlockAccumulator {
  double value = 0.0;
  std::uint64_t h_evaluations = 0;
  std::vector<double> per_bit;
  std::vector<double> grad;  // dims x M, label order
};

struct Scratch {
  std::vector<double> e, h, fold, table;
  explicit Scratch(std::size_t n) : e(n), h(n), fold(n), table(n) {}
};

// X is dims x M (structure of arrays) in label order, so point j carries label j.
template <int kDims>
class KernelRunner {
 public:
  KernelRunner(const std::vector<double>& X, std::size_t M, int m, int dims, double sigma_sq,
               const GhqGrid& grid, const KernelOptions& opt)
      : X_(X), M_(M), m_(m), dims_(kDims > 0 ? kDims : dims), sigma_(std::sqrt(sigma_sq)),
        inv_s2_(1.0 / sigma_sq), grid_(grid), opt_(opt) {}

  void run_block(std::size_t begin, std::size_t end, BlockAccumulator& acc) const {
    Scratch s(M_);
    std::vector<double> y(dims_);
    std::vector<double> log_c(m_);
    const auto weights = grid_.tensor_weights();
    const bool gmi = opt_.metric == Metric::GMI;

    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t t = 0; t < grid_.size(); ++t) {
        const auto node = grid_.tensor_node(t);
        double node_sq = 0.0;
        for (int d = 0; d < ndims(); ++d) {
          y[d] = X_[d * M_ + i] + sigma_ * node[d];
          node_sq += node[d] * node[d];
        }

        const double emax = exponents(y.data(), s.e.data());
        const double total = softmax_numerators(s.e.data(), emax, s.h.data());
        acc.h_evaluations += M_;
        const double log_total = std::log(total);
        const double w = weights[t];

        double coef_scale = 1.0 / total;
        if (!gmi) {
          acc.value += w * (emax + log_total + node_sq);
        } else {
          class_sums(i, s.h.data(), s.fold.data(), log_c.data());
          double term = m_ * log_total;
          for (int b = 0; b < m_; ++b) term -= log_c[b];
          acc.value += w * term;
          if (opt_.per_bit) {
            for (int b = 0; b < m_; ++b) acc.per_bit[b] += w * (log_total - log_c[b]);
          }
        }
        if (!opt_.gradient) continue;

        if (gmi) {
          bit_match_table(i, log_c.data(), s.table.data());
          gmi_weights(m_ / total, s.table.data(), s.h.data());
          coef_scale = 1.0;
        }
        accumulate_gradient(i, y.data(), s.h.data(), 2.0 * w * inv_s2_ * coef_scale, acc.grad);
      }
    }
  }

 private:
  int ndims() const {
    if constexpr (kDims > 0) return kDims;
    return dims_;
  }

  // e_j = -||y - x_j||^2 / sigma^2; returns max_j e_j.
  double exponents(const double* y, double* e) const {
    using namespace detail;
    const double* x = X_.data();
    const std::size_t M = M_;
    const std::size_t Mv = M - M % kLanes;
    const double inv = inv_s2_;
    vdouble vmax = vbroadcast(-std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < Mv; j += kLanes) {
      vdouble acc{};
      for (int d = 0; d < ndims(); ++d) {
        const vdouble a = y[d] - vload(x + d * M + j);
        acc += a * a;
      }
      const vdouble ej = acc * -inv;
      vstore(e + j, ej);
      vmax = ej > vmax ? ej : vmax;
    }
    double emax = hmax(vmax);
    for (std::size_t j = Mv; j < M; ++j) {
      double acc = 0.0;
      for (int d = 0; d < ndims(); ++d) {
        const double a = y[d] - x[d * M + j];
        acc += a * a;
      }
      e[j] = acc * -inv;
      emax = std::max(emax, e[j]);
    }
    return emax;
  }

  double softmax_numerators(const double* e, double emax, double* h) const {
    using namespace detail;
    const std::size_t Mv = M_ - M_ % kLanes;
    vdouble vt{};
    for (std::size_t j = 0; j < Mv; j += kLanes) {
      const vdouble hj = exp_nonpositive(vload(e + j) - emax);
      vstore(h + j, hj);
      vt += hj;
    }
    double total = hsum(vt);
    for (std::size_t j = Mv; j < M_; ++j) {
      h[j] = exp_nonpositive(e[j] - emax);
      total += h[j];
    }
    return total;
  }

  // log of sum_{j : bit_b(j) = bit_b(i)} h_j for every bit b, by repeated
  // folding of the label-indexed array (about 2M additions in total).
  void class_sums(std::size_t i, const double* h, double* fold, double* log_c) const {
    using namespace detail;
    std::size_t n = M_;
    const double* src = h;
    for (int b = m_ - 1; b >= 0; --b) {
      const std::size_t half = n / 2;
      const std::size_t hv = half - half % kLanes;
      vdouble vlo{}, vhi{};
      for (std::size_t j = 0; j < hv; j += kLanes) {
        const vdouble a = vload(src + j);
        const vdouble c = vload(src + j + half);
        vlo += a;
        vhi += c;
        vstore(fold + j, a + c);
      }
      double lo = hsum(vlo), hi = hsum(vhi);
      for (std::size_t j = hv; j < half; ++j) {
        lo += src[j];
        hi += src[j + half];
        fold[j] = src[j] + src[j + half];
      }
      log_c[b] = std::log(((i >> b) & 1u) ? hi : lo);
      src = fold;
      n = half;
    }
  }

  // table[j] = sum_b [bit_b(j) == bit_b(i)] / C_b
  void bit_match_table(std::size_t i, const double* log_c, double* table) const {
    double base = 0.0;
    for (int b = 0; b < m_; ++b) {
      if (((i >> b) & 1u) == 0) base += std::exp(-log_c[b]);
    }
    table[0] = base;
    for (int b = 0; b < m_; ++b) {
      const double inv_c = std::exp(-log_c[b]);
      const double delta = ((i >> b) & 1u) ? inv_c : -inv_c;
      const std::size_t stride = std::size_t{1} << b;
      for (std::size_t j = 0; j < stride; ++j) table[j + stride] = table[j] + delta;
    }
  }

  // GMI weights h_j (m/T - table_j), in place.
  void gmi_weights(double m_over_t, const double* table, double* h) const {
    using namespace detail;
    const std::size_t Mv = M_ - M_ % kLanes;
    for (std::size_t j = 0; j < Mv; j += kLanes) {
      vstore(h + j, vload(h + j) * (m_over_t - vload(table + j)));
    }
    for (std::size_t j = Mv; j < M_; ++j) h[j] *= m_over_t - table[j];
  }

  // d(term)/dx_j += c_j (y - x_j), d(term)/dx_i -= sum_j c_j (y - x_j),
  // with c_j = scale * alpha_j.
  void accumulate_gradient(std::size_t i, const double* y, const double* alpha, double scale,
                           std::vector<double>& grad) const {
    using namespace detail;
    const double* x = X_.data();
    const std::size_t M = M_;
    const std::size_t Mv = M - M % kLanes;
    for (int d = 0; d < ndims(); ++d) {
      const double yd = y[d];
      const double* xd = x + d * M;
      double* gd = grad.data() + d * M;
      vdouble vs{};
      for (std::size_t j = 0; j < Mv; j += kLanes) {
        const vdouble c = scale * vload(alpha + j) * (yd - vload(xd + j));
        vstore(gd + j, vload(gd + j) + c);
        vs += c;
      }
      double sum = hsum(vs);
      for (std::size_t j = Mv; j < M; ++j) {
        const double c = scale * alpha[j] * (yd - xd[j]);
        gd[j] += c;
        sum += c;
      }
      gd[i] -= sum;
    }
  }

  const std::vector<double>& X_;
  std::size_t M_;
  int m_;
  int dims_;
  double sigma_;
  double inv_s2_;
  const GhqGrid& grid_;
  const KernelOptions& opt_;
};

template <int kDims>
void run_blocks(const std::vector<double>& X, std::size_t M, int m, int dims, double sigma_sq,
                const GhqGrid& grid, const KernelOptions& opt,
                std::vector<BlockAccumulator>& blocks, std::size_t block_len) {
  KernelRunner<kDims> runner(X, M, m, dims, sigma_sq, grid, opt);
  parallel_for(blocks.size(), [&](std::size_t k) {
    const std::size_t begin = k * block_len;
    const std::size_t end = std::min(M, begin + block_len);
    runner.run_block(begin, end, blocks[k]);
  });
}

}  // namespace

KernelPass kernel_pass(std::span<const double> points, std::span<const std::uint32_t> labels,
                       int n_pairs, double sigma_sq, const GhqGrid& grid,
                       const KernelOptions& opt) {
  const int dims = 2 * n_pairs;
  const std::size_t M = labels.size();
  if (n_pairs < 1 || M < 2 || (M & (M - 1)) != 0 || points.size() != M * dims) {
    throw DimensionError("kernel_pass: expected a power-of-two number of rows of 2N coordinates");
  }
  if (grid.dims() != dims) {
    throw DimensionError("kernel_pass: quadrature grid has " + std::to_string(grid.dims()) +
                         " dimensions, constellation has " + std::to_string(dims));
  }
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw DomainError("kernel_pass: noise variance must be positive and finite");
  }
  int m = 0;
  while ((std::size_t{1} << m) < M) ++m;

  std::vector<std::size_t> row_of(M, M);
  for (std::size_t r = 0; r < M; ++r) {
    if (labels[r] >= M || row_of[labels[r]] != M) {
      throw ParameterError("kernel_pass: labels must be a permutation of 0..M-1");
    }
    row_of[labels[r]] = r;
  }
  std::vector<double> X(dims * M);
  for (std::size_t l = 0; l < M; ++l) {
    for (int d = 0; d < dims; ++d) X[d * M + l] = points[row_of[l] * dims + d];
  }

  const std::size_t n_blocks = std::min(M, kMaxBlocks);
  const std::size_t block_len = (M + n_blocks - 1) / n_blocks;
  std::vector<BlockAccumulator> blocks((M + block_len - 1) / block_len);
  for (auto& b : blocks) {
    if (opt.per_bit && opt.metric == Metric::GMI) b.per_bit.assign(m, 0.0);
    if (opt.gradient) b.grad.assign(dims * M, 0.0);
  }

  switch (dims) {
    case 2: run_blocks<2>(X, M, m, dims, sigma_sq, grid, opt, blocks, block_len); break;
    case 4: run_blocks<4>(X, M, m, dims, sigma_sq, grid, opt, blocks, block_len); break;
    default: run_blocks<0>(X, M, m, dims, sigma_sq, grid, opt, blocks, block_len); break;
  }

  const double norm = 1.0 / (static_cast<double>(M) * std::numbers::ln2);
  KernelPass out;
  double total = 0.0;
  for (const auto& b : blocks) {
    total += b.value;
    out.h_evaluations += b.h_evaluations;
  }
  out.value = m - total * norm;

  if (opt.per_bit && opt.metric == Metric::GMI) {
    out.per_bit.assign(m, 1.0);
    for (int k = 1; k <= m; ++k) {
      double acc = 0.0;
      for (const auto& b : blocks) acc += b.per_bit[m - k];
      out.per_bit[k - 1] = 1.0 - acc * norm;
    }
  }

  if (opt.gradient) {
    std::vector<double> g(dims * M, 0.0);
    for (const auto& b : blocks) {
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += b.grad[k];
    }
    out.gradient.resize(M * dims);
    for (std::size_t l = 0; l < M; ++l) {
      for (int d = 0; d < dims; ++d) out.gradient[row_of[l] * dims + d] = -norm * g[d * M + l];
    }
  }
  return out;
}

KernelPass kernel_pass(const Constellation& c, double sigma_sq, const GhqGrid& grid,
                       const KernelOptions& opt) {
  return kernel_pass(c.coords(), c.labels(), c.n_pairs(), sigma_sq, grid, opt);
}

}  // namespace gsc
