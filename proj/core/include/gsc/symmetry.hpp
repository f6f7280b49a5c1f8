#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gsc/constellation.hpp"

namespace gsc {

/// Free-variable view of an orthant-symmetric constellation.
///
/// The top 2N label bits are sign bits: bit (m-1-d) set means axis d is
/// negated. Base points are the rows whose sign bits are all zero; the free
/// variables are their coordinates, row-major over (base label, dimension).
/// Reconstruction places every reflected copy back at the row it occupied in
/// the folded constellation, so reconstruct(free_vars()) reproduces an
/// orthant-symmetric input exactly.
class OrthantFold {
 public:
  explicit OrthantFold(const Constellation& c);

  std::size_t base_count() const noexcept { return base_labels_.size(); }
  std::size_t n_free() const noexcept { return base_labels_.size() * dims_; }

  Eigen::VectorXd free_vars() const;
  Constellation reconstruct(std::span<const double> free) const;
  Constellation reconstruct(const Eigen::VectorXd& free) const;

  /// Chain rule through reconstruct: sums the reflected rows of a full
  /// gradient with per-axis sign flips.
  Eigen::VectorXd fold_gradient(std::span<const double> full_grad) const;

 private:
  int n_pairs_;
  int dims_;
  int bits_;
  std::vector<std::uint32_t> labels_;       // full labels in row order
  std::vector<std::uint32_t> base_labels_;  // ascending
  std::vector<double> base_coords_;
  // row_of_[s * base_count + b] = row of sign pattern s applied to base point b
  std::vector<std::size_t> row_of_;
};

/// True when every reflection of every row is present with the sign-bit
/// relabelling applied (exact comparison).
bool is_orthant_symmetric(const Constellation& c);

}  // namespace gsc
