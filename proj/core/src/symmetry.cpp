#include "gsc/symmetry.hpp"

#include <string>

#include "gsc/errors.hpp"

namespace gsc {

OrthantFold::OrthantFold(const Constellation& c)
    : n_pairs_(c.n_pairs()), dims_(c.dims()), bits_(c.bits_per_symbol()),
      labels_(c.labels().begin(), c.labels().end()) {
  if (bits_ < dims_) {
    throw ParameterError("fold_orthant: M = " + std::to_string(c.size()) +
                         " is not divisible by 2^(2N) = " + std::to_string(1u << dims_));
  }
  const int base_bits = bits_ - dims_;
  const std::size_t nb = std::size_t{1} << base_bits;
  const std::uint32_t mask = static_cast<std::uint32_t>(nb - 1);

  base_labels_.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) base_labels_[b] = static_cast<std::uint32_t>(b);
  base_coords_.resize(nb * dims_);
  row_of_.resize(c.size());
  for (std::size_t r = 0; r < c.size(); ++r) {
    const std::uint32_t s = labels_[r] >> base_bits;
    const std::uint32_t b = labels_[r] & mask;
    row_of_[s * nb + b] = r;
    if (s == 0) {
      for (int d = 0; d < dims_; ++d) base_coords_[b * dims_ + d] = c(r, d);
    }
  }
}

Eigen::VectorXd OrthantFold::free_vars() const {
  return Eigen::Map<const Eigen::VectorXd>(base_coords_.data(),
                                           static_cast<Eigen::Index>(base_coords_.size()));
}

Constellation OrthantFold::reconstruct(std::span<const double> free) const {
  if (free.size() != n_free()) throw DimensionError("OrthantFold: free-variable count mismatch");
  const std::size_t nb = base_count();
  const std::size_t patterns = std::size_t{1} << dims_;
  std::vector<double> coords(labels_.size() * dims_);
  for (std::size_t s = 0; s < patterns; ++s) {
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t row = row_of_[s * nb + b];
      for (int d = 0; d < dims_; ++d) {
        const bool flip = (s >> (dims_ - 1 - d)) & 1u;
        const double v = free[b * dims_ + d];
        coords[row * dims_ + d] = flip ? -v : v;
      }
    }
  }
  return Constellation(std::move(coords), labels_, n_pairs_);
}

Constellation OrthantFold::reconstruct(const Eigen::VectorXd& free) const {
  return reconstruct(std::span<const double>(free.data(), static_cast<std::size_t>(free.size())));
}

Eigen::VectorXd OrthantFold::fold_gradient(std::span<const double> full_grad) const {
  if (full_grad.size() != labels_.size() * dims_) {
    throw DimensionError("OrthantFold: gradient size mismatch");
  }
  const std::size_t nb = base_count();
  const std::size_t patterns = std::size_t{1} << dims_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_free()));
  for (std::size_t s = 0; s < patterns; ++s) {
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t row = row_of_[s * nb + b];
      for (int d = 0; d < dims_; ++d) {
        const bool flip = (s >> (dims_ - 1 - d)) & 1u;
        const double g = full_grad[row * dims_ + d];
        out(static_cast<Eigen::Index>(b * dims_ + d)) += flip ? -g : g;
      }
    }
  }
  return out;
}

bool is_orthant_symmetric(const Constellation& c) {
  if (c.bits_per_symbol() < c.dims()) return false;
  const OrthantFold fold(c);
  return fold.reconstruct(fold.free_vars()) == c;
}

}  // namespace gsc
