#include "gsc/air.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {

std::string_view to_string(Metric metric) { return metric == Metric::MI ? "mi" : "gmi"; }

Metric parse_metric(std::string_view text) {
  if (text == "mi") return Metric::MI;
  if (text == "gmi") return Metric::GMI;
  throw ParameterError("unknown metric: " + std::string(text));
}

AwgnChannel AwgnChannel::from_snr_db(double snr_db) {
  if (!std::isfinite(snr_db)) throw ParameterError("AwgnChannel: SNR must be finite");
  return AwgnChannel{std::pow(10.0, -snr_db / 10.0)};
}

double AwgnChannel::snr_db() const { return -10.0 * std::log10(sigma_sq); }

double h_kernel_log(std::span<const double> z, std::span<const double> xi,
                    std::span<const double> xj, double sigma_sq) {
  if (z.size() != xi.size() || xi.size() != xj.size()) {
    throw DimensionError("h_kernel_log: vector sizes differ");
  }
  double dist_sq = 0.0;
  double inner = 0.0;
  for (std::size_t d = 0; d < z.size(); ++d) {
    const double diff = xi[d] - xj[d];
    dist_sq += diff * diff;
    inner += z[d] * diff;
  }
  return (dist_sq + 2.0 * inner) / -sigma_sq;
}

namespace {

void require_normalized(const Constellation& c) {
  const double p = c.mean_power();
  if (std::abs(p - 1.0) > 1e-9) {
    throw DomainError("constellation is not normalized (mean power " + std::to_string(p) +
                      "); call normalize() first");
  }
}

double clamp_rate(double value, int bits) { return std::clamp(value, 0.0, double(bits)); }

}  // namespace

double mi(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid) {
  require_normalized(c);
  const auto pass = kernel_pass(c, ch.sigma_sq, grid, {Metric::MI, false, false});
  return clamp_rate(pass.value, c.bits_per_symbol());
}

double gmi(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid) {
  require_normalized(c);
  const auto pass = kernel_pass(c, ch.sigma_sq, grid, {Metric::GMI, false, false});
  return clamp_rate(pass.value, c.bits_per_symbol());
}

std::vector<double> gmi_per_bit(const Constellation& c, const AwgnChannel& ch,
                                const GhqGrid& grid) {
  require_normalized(c);
  return kernel_pass(c, ch.sigma_sq, grid, {Metric::GMI, false, true}).per_bit;
}

AirReport evaluate(const Constellation& c, const AwgnChannel& ch, const GhqGrid& grid) {
  AirReport r;
  r.snr_db = ch.snr_db();
  r.mi = mi(c, ch, grid);
  r.gmi = gmi(c, ch, grid);
  r.capacity_2d = capacity_2d(r.snr_db);
  r.gap_gmi = c.n_pairs() * r.capacity_2d - r.gmi;
  return r;
}

double capacity_2d(double snr_db) { return std::log2(1.0 + std::pow(10.0, snr_db / 10.0)); }

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double r_star(const FecParams& fec, double ber) {
  if (!(ber >= 0.0 && ber <= 0.5)) throw ParameterError("r_star: BER must lie in [0, 0.5]");
  if (!(fec.code_rate > 0.0 && fec.code_rate <= 1.0)) {
    throw ParameterError("r_star: code rate must lie in (0, 1]");
  }
  if (fec.bits_per_symbol < 1) throw ParameterError("r_star: bits per symbol must be positive");
  return fec.bits_per_symbol * fec.code_rate * (1.0 - binary_entropy(ber));
}

MonteCarloEstimate mi_monte_carlo(const Constellation& c, const AwgnChannel& ch,
                                  std::size_t n_samples, std::uint64_t seed, Metric metric) {
  if (n_samples < 1000) throw ParameterError("mi_monte_carlo: need at least 1000 samples");
  const std::size_t M = c.size();
  const int dims = c.dims();
  const int m = c.bits_per_symbol();
  const double sigma_sq = ch.sigma_sq;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma_sq / 2.0));

  std::vector<double> y(dims);
  std::vector<double> e(M);
  double mean = 0.0;
  double m2 = 0.0;  // Welford
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t i = s % M;
    const auto xi = c.point(i);
    double z_sq = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double z = noise(rng);
      y[d] = xi[d] + z;
      z_sq += z * z;
    }
    for (std::size_t j = 0; j < M; ++j) {
      const auto xj = c.point(j);
      double dist = 0.0;
      for (int d = 0; d < dims; ++d) dist += (y[d] - xj[d]) * (y[d] - xj[d]);
      e[j] = -dist / sigma_sq;
    }
    auto log_sum = [&](auto&& keep) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < M; ++j) {
        if (keep(j)) mx = std::max(mx, e[j]);
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        if (keep(j)) acc += std::exp(e[j] - mx);
      }
      return mx + std::log(acc);
    };
    const double all = log_sum([](std::size_t) { return true; });

    double term = 0.0;  // natural-log loss relative to m bits
    if (metric == Metric::MI) {
      term = all + z_sq / sigma_sq;
    } else {
      const auto labels = c.labels();
      term = m * all;
      for (int b = 0; b < m; ++b) {
        const auto bit = (labels[i] >> b) & 1u;
        term -= log_sum([&](std::size_t j) { return ((labels[j] >> b) & 1u) == bit; });
      }
    }
    const double sample = m - term / std::numbers::ln2;
    const double delta = sample - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (sample - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

}  // namespace gsc
