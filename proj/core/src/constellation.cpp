#include "gsc/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {

Constellation::Constellation(std::vector<double> coords, std::vector<std::uint32_t> labels,
                             int n_pairs)
    : coords_(std::move(coords)), labels_(std::move(labels)), n_pairs_(n_pairs) {
  if (n_pairs_ < 1) throw ParameterError("Constellation: n_pairs must be >= 1");
  const std::size_t m_points = labels_.size();
  if (m_points < 2 || !std::has_single_bit(m_points) || m_points > (std::size_t{1} << 30)) {
    throw ParameterError("Constellation: size must be a power of two >= 2, got " +
                         std::to_string(m_points));
  }
  if (coords_.size() != m_points * static_cast<std::size_t>(dims())) {
    throw ParameterError("Constellation: coordinate count does not match M x 2N");
  }
  bits_ = std::countr_zero(m_points);

  std::vector<bool> seen(m_points, false);
  for (std::uint32_t l : labels_) {
    if (l >= m_points || seen[l]) {
      throw ParameterError("Constellation: labels must be a permutation of 0..M-1");
    }
    seen[l] = true;
  }
  for (double v : coords_) {
    if (!std::isfinite(v)) throw ParameterError("Constellation: non-finite coordinate");
  }
}

Constellation Constellation::with_coords(std::vector<double> coords) const {
  return Constellation(std::move(coords), labels_, n_pairs_);
}

Constellation Constellation::scaled(double factor) const {
  std::vector<double> out(coords_);
  for (double& v : out) v *= factor;
  return with_coords(std::move(out));
}

double Constellation::frobenius_norm_sq() const {
  double acc = 0.0;
  for (double v : coords_) acc += v * v;
  return acc;
}

double Constellation::mean_power() const {
  return frobenius_norm_sq() / (static_cast<double>(size()) * n_pairs_);
}

std::vector<std::size_t> Constellation::rows_by_label() const {
  std::vector<std::size_t> rows(size());
  for (std::size_t i = 0; i < size(); ++i) rows[labels_[i]] = i;
  return rows;
}

Constellation normalize(const Constellation& c) {
  const double norm_sq = c.frobenius_norm_sq();
  if (!(norm_sq > 0.0)) throw DomainError("normalize: constellation has zero norm");
  const double factor =
      std::sqrt(static_cast<double>(c.size()) * c.n_pairs()) / std::sqrt(norm_sq);
  return c.scaled(factor);
}

double excess_kurtosis(std::span<const double> coords) {
  if (coords.empty() || coords.size() % 2 != 0) {
    throw ParameterError("excess_kurtosis: expects rows of two coordinates");
  }
  double s2 = 0.0;
  double s4 = 0.0;
  for (std::size_t i = 0; i < coords.size(); i += 2) {
    const double a = coords[i] * coords[i] + coords[i + 1] * coords[i + 1];
    s2 += a;
    s4 += a * a;
  }
  if (!(s2 > 0.0)) throw DomainError("excess_kurtosis: zero signal power");
  const double n = static_cast<double>(coords.size() / 2);
  return (s4 / n) / ((s2 / n) * (s2 / n)) - 2.0;
}

double excess_kurtosis(const Constellation& c) {
  if (c.n_pairs() != 1) {
    throw UnsupportedDimensionError("excess_kurtosis: defined for one-pair constellations only");
  }
  return excess_kurtosis(c.coords());
}

std::string_view to_string(StartKind kind) {
  switch (kind) {
    case StartKind::Square: return "square";
    case StartKind::Ring: return "ring";
    case StartKind::Lattice: return "lattice";
    case StartKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

StartKind parse_start_kind(std::string_view text) {
  if (text == "square") return StartKind::Square;
  if (text == "ring") return StartKind::Ring;
  if (text == "lattice") return StartKind::Lattice;
  if (text == "gaussian") return StartKind::Gaussian;
  throw ParameterError("unknown constellation kind: " + std::string(text));
}

Constellation orthant_expand(std::span<const double> base_coords,
                             std::span<const std::uint32_t> base_labels, int n_pairs) {
  const int dims = 2 * n_pairs;
  const std::size_t nb = base_labels.size();
  if (nb == 0 || !std::has_single_bit(nb) || base_coords.size() != nb * dims) {
    throw ParameterError("orthant_expand: base must hold a power-of-two number of rows");
  }
  const int base_bits = std::countr_zero(nb);
  const std::size_t patterns = std::size_t{1} << dims;

  std::vector<double> coords;
  std::vector<std::uint32_t> labels;
  coords.reserve(nb * patterns * dims);
  labels.reserve(nb * patterns);
  for (std::size_t s = 0; s < patterns; ++s) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (int d = 0; d < dims; ++d) {
        const bool flip = (s >> (dims - 1 - d)) & 1u;
        const double v = base_coords[b * dims + d];
        coords.push_back(flip ? -v : v);
      }
      labels.push_back(static_cast<std::uint32_t>(s << base_bits) | base_labels[b]);
    }
  }
  return Constellation(std::move(coords), std::move(labels), n_pairs);
}

namespace {

int checked_bits(std::size_t size) {
  if (size < 2 || !std::has_single_bit(size) || size > (std::size_t{1} << 30)) {
    throw ParameterError("generate: size must be a power of two >= 2, got " +
                         std::to_string(size));
  }
  return std::countr_zero(size);
}

// Odd-integer grid with 2^bits[d] levels along axis d, lexicographic order.
std::vector<double> grid_points(const BitAllocation& alloc) {
  const int dims = static_cast<int>(alloc.bits_per_dim.size());
  const std::size_t total = std::size_t{1} << alloc.total_bits();
  std::vector<double> pts(total * dims);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int d = dims - 1; d >= 0; --d) {
      const std::size_t levels = std::size_t{1} << alloc.bits_per_dim[d];
      const std::size_t k = rest % levels;
      rest /= levels;
      pts[i * dims + d] = 2.0 * static_cast<double>(k) - static_cast<double>(levels - 1);
    }
  }
  return pts;
}

// ASK-PSK: rings of radius 1..n_rings, points_per_ring phases offset by half a step.
std::vector<double> ring_points_2d(std::size_t size, int n_rings) {
  const std::size_t rings = static_cast<std::size_t>(n_rings);
  const std::size_t per_ring = size / rings;
  std::vector<double> pts;
  pts.reserve(size * 2);
  for (std::size_t r = 0; r < rings; ++r) {
    const double radius = static_cast<double>(r + 1);
    for (std::size_t j = 0; j < per_ring; ++j) {
      const double angle =
          (static_cast<double>(j) + 0.5) * 2.0 * std::numbers::pi / static_cast<double>(per_ring);
      pts.push_back(radius * std::cos(angle));
      pts.push_back(radius * std::sin(angle));
    }
  }
  return pts;
}

struct RawPoints {
  std::vector<double> coords;
  BitAllocation alloc;  // full-constellation allocation in `basis`
  LabelBasis basis;
};

RawPoints raw_points(const GenerateOptions& opt, int m) {
  const int dims = 2 * opt.n_pairs;
  switch (opt.kind) {
    case StartKind::Square: {
      if (m % dims != 0) {
        throw ParameterError("generate: square grid needs log2(M) divisible by 2N; use lattice or ring for M=" +
                             std::to_string(opt.size));
      }
      BitAllocation alloc{std::vector<int>(dims, m / dims)};
      return {grid_points(alloc), alloc, opt.basis.value_or(LabelBasis::Cartesian)};
    }
    case StartKind::Lattice: {
      BitAllocation alloc = default_allocation(m, dims);
      return {grid_points(alloc), alloc, opt.basis.value_or(LabelBasis::Cartesian)};
    }
    case StartKind::Gaussian: {
      std::mt19937_64 rng(opt.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> pts(opt.size * dims);
      for (double& v : pts) v = normal(rng);
      return {std::move(pts), default_allocation(m, dims),
              opt.basis.value_or(LabelBasis::Cartesian)};
    }
    case StartKind::Ring: {
      if (m % opt.n_pairs != 0) {
        throw ParameterError("generate: ring constellation needs log2(M) divisible by N");
      }
      const int pair_bits = m / opt.n_pairs;
      const int ring_bits =
          opt.n_rings > 0 ? std::countr_zero(static_cast<unsigned>(opt.n_rings)) : pair_bits / 2;
      if (opt.n_rings > 0 && (!std::has_single_bit(static_cast<unsigned>(opt.n_rings)) ||
                              ring_bits > pair_bits)) {
        throw ParameterError("generate: n_rings must be a power of two not exceeding M per pair");
      }
      const std::size_t pair_size = std::size_t{1} << pair_bits;
      const auto ring = ring_points_2d(pair_size, 1 << ring_bits);

      // Cartesian product of the per-pair rings.
      std::vector<double> pts(opt.size * dims);
      for (std::size_t i = 0; i < opt.size; ++i) {
        std::size_t rest = i;
        for (int p = opt.n_pairs - 1; p >= 0; --p) {
          const std::size_t k = rest % pair_size;
          rest /= pair_size;
          pts[i * dims + 2 * p] = ring[2 * k];
          pts[i * dims + 2 * p + 1] = ring[2 * k + 1];
        }
      }
      BitAllocation alloc = opt.n_pairs == 1
                                ? BitAllocation{{ring_bits, pair_bits - ring_bits}}
                                : default_allocation(m, dims);
      return {std::move(pts), alloc, opt.basis.value_or(LabelBasis::Spherical)};
    }
  }
  throw ParameterError("generate: unknown kind");
}

Constellation generate_symmetric(const GenerateOptions& opt, int m) {
  const int dims = 2 * opt.n_pairs;
  if (m < dims) {
    throw ParameterError("generate: orthant symmetry needs M >= 2^(2N)");
  }
  const std::size_t nb = opt.size >> dims;
  const int base_bits = m - dims;

  std::vector<double> base;
  BitAllocation alloc;
  LabelBasis basis = opt.basis.value_or(LabelBasis::Cartesian);
  if (opt.kind == StartKind::Gaussian) {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    base.resize(nb * dims);
    for (double& v : base) v = std::abs(normal(rng));
    alloc = default_allocation(base_bits, dims);
  } else {
    RawPoints raw = raw_points(opt, m);
    basis = raw.basis;
    for (std::size_t i = 0; i < opt.size; ++i) {
      const double* x = raw.coords.data() + i * dims;
      if (std::all_of(x, x + dims, [](double v) { return v > 0.0; })) {
        base.insert(base.end(), x, x + dims);
      }
    }
    if (base.size() != nb * dims) {
      throw ParameterError("generate: " + std::string(to_string(opt.kind)) +
                           " constellation of this size is not orthant symmetric");
    }
    // Each axis reflection halves one coordinate of the labelling basis:
    // Cartesian axes directly, or the phase quadrant for one-pair rings.
    alloc = raw.alloc;
    if (basis == LabelBasis::Cartesian && opt.kind != StartKind::Ring) {
      for (int& b : alloc.bits_per_dim) --b;
    } else if (basis == LabelBasis::Spherical && opt.kind == StartKind::Ring &&
               opt.n_pairs == 1 && alloc.bits_per_dim[1] >= 2) {
      alloc.bits_per_dim[1] -= 2;
    } else {
      alloc = default_allocation(base_bits, dims);
    }
  }

  const auto base_labels = assign_labels(base, dims, alloc, basis);
  return orthant_expand(base, base_labels, opt.n_pairs);
}

}  // namespace

Constellation generate(const GenerateOptions& opt) {
  if (opt.n_pairs < 1) throw ParameterError("generate: n_pairs must be >= 1");
  const int m = checked_bits(opt.size);
  if (opt.orthant_symmetric) return generate_symmetric(opt, m);

  RawPoints raw = raw_points(opt, m);
  auto labels = assign_labels(raw.coords, 2 * opt.n_pairs, raw.alloc, raw.basis);
  return Constellation(std::move(raw.coords), std::move(labels), opt.n_pairs);
}

}  // namespace gsc
