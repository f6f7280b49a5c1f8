#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gsc/labeling.hpp"

namespace gsc {

/// M labelled points in 2N real dimensions.
///
/// Coordinates are stored row-major (row i is symbol x_i). Invariants, checked
/// on construction: M = 2^m with m >= 1, labels form a permutation of
/// {0, ..., M-1}, and every coordinate is finite. Values are immutable.
class Constellation {
 public:
  Constellation(std::vector<double> coords, std::vector<std::uint32_t> labels, int n_pairs);

  std::size_t size() const noexcept { return labels_.size(); }
  int n_pairs() const noexcept { return n_pairs_; }
  int dims() const noexcept { return 2 * n_pairs_; }
  int bits_per_symbol() const noexcept { return bits_; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * dims(), dims());
  }
  double operator()(std::size_t i, int d) const { return coords_[i * dims() + d]; }

  /// Same labels, new coordinates (validated).
  Constellation with_coords(std::vector<double> coords) const;
  Constellation scaled(double factor) const;

  double frobenius_norm_sq() const;
  /// Average energy per 2 real dimensions, ||x||_F^2 / (M N).
  double mean_power() const;

  /// Row index carrying each label: rows_by_label()[l] is the row with label l.
  std::vector<std::size_t> rows_by_label() const;

  friend bool operator==(const Constellation&, const Constellation&) = default;

 private:
  std::vector<double> coords_;
  std::vector<std::uint32_t> labels_;
  int n_pairs_ = 1;
  int bits_ = 1;
};

/// Post-FEC rate parameters.
struct FecParams {
  double code_rate = 1.0;
  int bits_per_symbol = 1;
};

/// Scales x to unit average energy per 2 real dimensions:
/// u = x / (sqrt(1/(MN)) ||x||_F). Throws DomainError on an all-zero input.
Constellation normalize(const Constellation& c);

/// E|X|^4 / (E|X|^2)^2 - 2 for one-pair (complex) constellations.
double excess_kurtosis(const Constellation& c);

/// Raw-coordinate version of excess_kurtosis for M x 2 row-major data.
double excess_kurtosis(std::span<const double> coords);

enum class StartKind { Square, Ring, Lattice, Gaussian };

std::string_view to_string(StartKind kind);
StartKind parse_start_kind(std::string_view text);

struct GenerateOptions {
  StartKind kind = StartKind::Square;
  std::size_t size = 16;
  int n_pairs = 1;
  std::uint64_t seed = 0;
  /// Labelling basis; defaults to spherical for rings and Cartesian otherwise.
  std::optional<LabelBasis> basis;
  /// Ring count for StartKind::Ring; 0 selects 2^floor(m/2) per pair.
  int n_rings = 0;
  /// Build an axis-reflection symmetric constellation whose top 2N label
  /// bits are sign bits (see orthant_expand).
  bool orthant_symmetric = false;
};

/// Starting constellations: square QAM grid, ASK-PSK rings, rectangular
/// lattice or i.i.d. Gaussian draw. Coordinates are returned unnormalized.
Constellation generate(const GenerateOptions& options);

/// Builds the full constellation from its base-orthant points.
///
/// `base_coords` holds M / 2^(2N) rows of 2N coordinates and `base_labels`
/// their (m - 2N)-bit labels. Sign pattern s in [0, 2^(2N)) produces the
/// rows with label (s << (m - 2N)) | base_label, where bit (2N-1-d) of s set
/// negates axis d. Rows are emitted sign pattern major.
Constellation orthant_expand(std::span<const double> base_coords,
                             std::span<const std::uint32_t> base_labels, int n_pairs);

}  // namespace gsc
