#include "gsc/labeling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {

std::string_view to_string(LabelBasis basis) {
  return basis == LabelBasis::Cartesian ? "cartesian" : "spherical";
}

LabelBasis parse_label_basis(std::string_view text) {
  if (text == "cartesian") return LabelBasis::Cartesian;
  if (text == "spherical") return LabelBasis::Spherical;
  throw ParameterError("unknown label basis: " + std::string(text));
}

int BitAllocation::total_bits() const {
  return std::accumulate(bits_per_dim.begin(), bits_per_dim.end(), 0);
}

BitAllocation default_allocation(int total_bits, int dims) {
  if (dims < 1 || total_bits < 0) throw ParameterError("default_allocation: invalid arguments");
  BitAllocation alloc;
  alloc.bits_per_dim.assign(dims, total_bits / dims);
  for (int d = 0; d < total_bits % dims; ++d) ++alloc.bits_per_dim[d];
  return alloc;
}

std::vector<std::uint32_t> graymap(int m) {
  if (m < 0 || m > 31) throw ParameterError("graymap: bit count out of range");
  std::vector<std::uint32_t> seq(std::size_t{1} << m);
  for (std::uint32_t k = 0; k < seq.size(); ++k) seq[k] = k ^ (k >> 1);
  return seq;
}

int hamming_distance(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

namespace {

void validate_allocation(std::size_t n_points, int dims, const BitAllocation& alloc) {
  if (dims < 1) throw ParameterError("assign_labels: need at least one dimension");
  if (static_cast<int>(alloc.bits_per_dim.size()) != dims) {
    throw ParameterError("assign_labels: allocation length " +
                         std::to_string(alloc.bits_per_dim.size()) + " does not match " +
                         std::to_string(dims) + " dimensions");
  }
  for (int b : alloc.bits_per_dim) {
    if (b < 0) throw ParameterError("assign_labels: negative bit count");
  }
  const int total = alloc.total_bits();
  if (total > 31 || n_points != (std::size_t{1} << total)) {
    throw ParameterError("assign_labels: " + std::to_string(n_points) +
                         " points cannot carry " + std::to_string(total) + " bits");
  }
}

// Labels the points `idx` (in their current order) using columns col.. of
// the allocation; writes labels relative to this subtree.
void label_recursive(std::span<const double> points, int dims, const BitAllocation& alloc,
                     int col, std::span<std::size_t> idx, std::vector<std::uint32_t>& labels) {
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return points[a * dims + col] < points[b * dims + col];
  });

  const int bits = alloc.bits_per_dim[col];
  const auto gray = graymap(bits);
  if (col == dims - 1) {
    for (std::size_t p = 0; p < idx.size(); ++p) labels[idx[p]] = gray[p];
    return;
  }

  const std::size_t block = idx.size() >> bits;
  for (std::size_t j = 0; j < gray.size(); ++j) {
    auto sel = idx.subspan(j * block, block);
    label_recursive(points, dims, alloc, col + 1, sel, labels);
    const auto prefix = static_cast<std::uint32_t>(block) * gray[j];
    for (std::size_t s : sel) labels[s] += prefix;
  }
}

}  // namespace

std::vector<std::uint32_t> assign_labels(std::span<const double> points, int dims,
                                         const BitAllocation& alloc) {
  if (dims < 1 || points.size() % dims != 0) {
    throw ParameterError("assign_labels: point buffer does not hold whole rows");
  }
  const std::size_t n = points.size() / dims;
  validate_allocation(n, dims, alloc);

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<std::uint32_t> labels(n, 0);
  label_recursive(points, dims, alloc, 0, idx, labels);
  return labels;
}

std::vector<double> to_spherical(std::span<const double> points, int dims) {
  if (dims < 2 || dims % 2 != 0 || points.size() % dims != 0) {
    throw ParameterError("to_spherical: expects rows of 2N coordinates");
  }
  const int pairs = dims / 2;
  const std::size_t n = points.size() / dims;
  std::vector<double> out(points.size());
  std::vector<double> rho(pairs);

  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points.data() + i * dims;
    double* o = out.data() + i * dims;
    double r2 = 0.0;
    for (int p = 0; p < pairs; ++p) {
      rho[p] = std::hypot(x[2 * p], x[2 * p + 1]);
      r2 += rho[p] * rho[p];
    }
    o[0] = std::sqrt(r2);

    // amplitude-split angles: atan2(|rho_{k+1..N}|, rho_k)
    double tail2 = 0.0;
    for (int k = pairs - 2; k >= 0; --k) {
      tail2 += rho[k + 1] * rho[k + 1];
      o[1 + k] = std::atan2(std::sqrt(tail2), rho[k]);
    }

    for (int p = 0; p < pairs; ++p) {
      double phase = 0.0;
      if (rho[p] > 0.0) {
        phase = std::atan2(x[2 * p + 1], x[2 * p]);
        if (phase < 0.0) phase += 2.0 * std::numbers::pi;
      }
      o[pairs + p] = phase;
    }
  }
  return out;
}

std::vector<std::uint32_t> assign_labels_spherical(std::span<const double> points, int dims,
                                                   const BitAllocation& alloc) {
  const auto sph = to_spherical(points, dims);
  return assign_labels(sph, dims, alloc);
}

std::vector<std::uint32_t> assign_labels(std::span<const double> points, int dims,
                                         const BitAllocation& alloc, LabelBasis basis) {
  return basis == LabelBasis::Cartesian ? assign_labels(points, dims, alloc)
                                        : assign_labels_spherical(points, dims, alloc);
}

}  // namespace gsc
