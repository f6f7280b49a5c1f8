#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gsc/constellation.hpp"
#include "gsc/ghq.hpp"

namespace gsc {

enum class Metric { MI, GMI };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

/// AWGN with noise variance sigma_sq per 2 real dimensions.
struct AwgnChannel {
  double sigma_sq = 1.0;

  /// SNR = 1 / sigma_sq for signals with unit energy per 2 real dimensions.
  static AwgnChannel from_snr_db(double snr_db);
  double snr_db() const;
};

struct AirReport {
  double mi = 0.0;           // bits per 2N-dimensional symbol
  double gmi = 0.0;          // bits per 2N-dimensional symbol
  double capacity_2d = 0.0;  // bits per 2 real dimensions
  double gap_gmi = 0.0;      // N * capacity_2d - gmi
  double snr_db = 0.0;
};

struct KernelOptions {
  Metric metric = Metric::MI;
  bool gradient = false;
  /// GMI only: also report I(C_k; Y) for every bit.
  bool per_bit = false;
};

/// Output of one quadrature pass over all (symbol, node) pairs.
struct KernelPass {
  /// MI or GMI in bits per symbol, not clamped.
  double value = 0.0;
  /// d value / d x, row-major M x 2N in the input row order (if requested).
  std::vector<double> gradient;
  /// I(C_k; Y) for k = 1..m, k = 1 being the most significant label bit.
  std::vector<double> per_bit;
  /// Number of h-kernel evaluations performed.
  std::uint64_t h_evaluations = 0;
};

/// Shared MI/GMI kernel pass.
///
/// `points` need not be normalized; the noise variance is taken as given.
/// Every log h(z, x_i, x_j) is evaluated once per (i, j, node) and the
/// stabilised softmax weights of the value pass are reused for the gradient,
/// so requesting the gradient performs no additional kernel evaluations.
/// Work is split over fixed blocks of symbols and reduced in block order,
/// which keeps results independent of the thread count.
KernelPass kernel_pass(std::span<const double> points, std::span<const std::uint32_t> labels,
                       int n_pairs, double sigma_sq, const GhqGrid& grid,
                       const KernelOptions& options);

KernelPass kernel_pass(const Constellation& c, double sigma_sq, const GhqGrid& grid,
                       const KernelOptions& options);

/// log h(z, x_i, x_j) = (||x_i - x_j||^2 + 2 <z, x_i - x_j>) / (-sigma_sq).
double h_kernel_log(std::span<const double> z, std::span<const double> xi,
                    std::span<const double> xj, double sigma_sq);

/// Mutual information of a normalized constellation, clamped to [0, log2 M].
double mi(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid);

/// Bit-wise generalized mutual information, clamped to [0, log2 M].
double gmi(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid);

/// I(C_k; Y) for every bit; sums to the unclamped GMI.
std::vector<double> gmi_per_bit(const Constellation& c, const AwgnChannel& ch,
                                const GhqGrid& grid);

AirReport evaluate(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid);

/// log2(1 + SNR).
double capacity_2d(double snr_db);

/// H_b(p) in bits, H_b(0) = H_b(1) = 0.
double binary_entropy(double p);

/// m R (1 - H_b(ber)).
double r_star(const FecParams& fec, double ber);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of MI or GMI with Gaussian noise draws.
/// Symbols are visited round-robin; the estimate is deterministic for a
/// fixed seed. Uses std::exp and an independent log-sum-exp.
MonteCarloEstimate mi_monte_carlo(const Constellation& c, const AwgnChannel& ch,
                                  std::size_t n_samples, std::uint64_t seed, Metric metric);

}  // namespace gsc
