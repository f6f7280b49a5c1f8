#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gsc {

enum class LabelBasis { Cartesian, Spherical };

std::string_view to_string(LabelBasis basis);
LabelBasis parse_label_basis(std::string_view text);

/// Number of bits assigned to each coordinate of the labelling basis.
struct BitAllocation {
  std::vector<int> bits_per_dim;

  int total_bits() const;
};

/// Splits `total_bits` over `dims` coordinates as evenly as possible,
/// giving the larger shares to the earlier coordinates.
BitAllocation default_allocation(int total_bits, int dims);

/// Binary-reflected Gray sequence of length 2^m.
std::vector<std::uint32_t> graymap(int m);

/// Recursive Gray labelling of an M x D point set (row-major).
///
/// Points are stably sorted along the first coordinate and split into
/// 2^bits[0] contiguous blocks; block j receives the Gray prefix graymap[j]
/// and is labelled recursively along the remaining coordinates. The
/// returned vector holds one label per input row, a permutation of
/// {0, ..., M-1}. Labels attach to points, so shuffling the input rows
/// shuffles the output identically.
std::vector<std::uint32_t> assign_labels(std::span<const double> points, int dims,
                                         const BitAllocation& alloc);

/// Maps each row to (radius, amplitude-split angles..., one phase per pair).
///
/// For one pair this is (|x|, atan2(x2, x1)). For N pairs the per-pair radii
/// rho_p are split hyperspherically into N-1 angles in [0, pi/2], followed by
/// the N phases in [0, 2*pi). A pair at the exact origin gets phase 0.
std::vector<double> to_spherical(std::span<const double> points, int dims);

/// assign_labels applied in the spherical basis of `to_spherical`.
std::vector<std::uint32_t> assign_labels_spherical(std::span<const double> points, int dims,
                                                   const BitAllocation& alloc);

std::vector<std::uint32_t> assign_labels(std::span<const double> points, int dims,
                                         const BitAllocation& alloc, LabelBasis basis);

/// Number of differing bits between two labels.
int hamming_distance(std::uint32_t a, std::uint32_t b);

}  // namespace gsc
