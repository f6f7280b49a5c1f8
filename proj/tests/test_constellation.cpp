#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "frozen_values.hpp"
#include "gsc/constellation.hpp"
#include "gsc/errors.hpp"
#include "gsc/symmetry.hpp"
#include "oracles.hpp"

using namespace gsc;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST(Constellation, ValidatesInvariants) {
  EXPECT_THROW(Constellation({0, 0, 1, 1, 2, 2}, {0, 1, 2}, 1), ParameterError);
  EXPECT_THROW(Constellation({0, 0, 1, 1}, {0, 0}, 1), ParameterError);
  EXPECT_THROW(Constellation({0, 0, 1, 1}, {0, 2}, 1), ParameterError);
  EXPECT_THROW(Constellation({0, NAN, 1, 1}, {0, 1}, 1), ParameterError);
  EXPECT_THROW(Constellation({0, INFINITY, 1, 1}, {0, 1}, 1), ParameterError);
  EXPECT_THROW(Constellation({0, 0, 1}, {0, 1}, 1), ParameterError);
  const Constellation c({0, 0, 1, 1}, {1, 0}, 1);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.bits_per_symbol(), 1);
  EXPECT_EQ(c.rows_by_label(), (std::vector<std::size_t>{1, 0}));
}

TEST(Normalize, Examples) {
  const auto q = oracle::qpsk();
  EXPECT_LT(max_abs_diff(normalize(q).coords(), q.coords()), 1e-15);

  const Constellation two({3, 0, -3, 0}, {0, 1}, 1);
  const auto u = normalize(two);
  EXPECT_DOUBLE_EQ(u(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(u(1, 0), -1.0);
  EXPECT_EQ(u.labels()[1], 1u);

  EXPECT_THROW(normalize(Constellation({0, 0, 0, 0}, {0, 1}, 1)), DomainError);
}

TEST(Normalize, IdempotentAndScaleInvariant) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracle::random_constellation(16, 1 + trial % 2, rng, 3.0);
    const auto u = normalize(x);
    EXPECT_NEAR(u.frobenius_norm_sq(), 16.0 * x.n_pairs(), 1e-12);
    EXPECT_NEAR(u.mean_power(), 1.0, 1e-14);
    EXPECT_LT(max_abs_diff(normalize(u).coords(), u.coords()), 1e-14);
    EXPECT_LT(max_abs_diff(normalize(x.scaled(2.0)).coords(), u.coords()), 1e-14);
    EXPECT_LT(max_abs_diff(normalize(x.scaled(0.0137)).coords(), u.coords()), 1e-14);
  }
}

TEST(Kurtosis, Examples) {
  EXPECT_NEAR(excess_kurtosis(oracle::qpsk()), -1.0, 1e-15);
  const auto qam = generate({StartKind::Square, 16, 1, 0});
  EXPECT_NEAR(excess_kurtosis(qam), frozen::kQam16Kurtosis, 1e-14);

  const auto g = generate({StartKind::Gaussian, 1 << 16, 1, 3});
  EXPECT_NEAR(excess_kurtosis(g), 0.0, 0.05);
}

TEST(Kurtosis, ScaleInvariantAndBoundedBelow) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracle::random_constellation(32, 1, rng);
    const double phi = excess_kurtosis(x);
    EXPECT_NEAR(excess_kurtosis(x.scaled(-4.5)), phi, 1e-12);
    EXPECT_NEAR(excess_kurtosis(x.scaled(1e-3)), phi, 1e-12);
    EXPECT_GT(phi, -1.0);
  }
  // Equal moduli give exactly -1, unequal moduli stay above it.
  std::vector<double> ring;
  for (int k = 0; k < 8; ++k) {
    ring.push_back(2.0 * std::cos(0.3 + k));
    ring.push_back(2.0 * std::sin(0.3 + k));
  }
  const Constellation equal(ring, {0, 1, 2, 3, 4, 5, 6, 7}, 1);
  EXPECT_NEAR(excess_kurtosis(equal), -1.0, 1e-14);
  ring[0] *= 1.01;
  EXPECT_GT(excess_kurtosis(equal.with_coords(ring)), -1.0);
}

TEST(Kurtosis, Errors) {
  EXPECT_THROW(excess_kurtosis(generate({StartKind::Square, 16, 2, 0})),
               UnsupportedDimensionError);
  EXPECT_THROW(excess_kurtosis(Constellation({0, 0, 0, 0}, {0, 1}, 1)), DomainError);
}

TEST(Generate, SquareQam16IsGrayGrid) {
  const auto c = generate({StartKind::Square, 16, 1, 0});
  ASSERT_EQ(c.size(), 16u);
  std::map<std::pair<int, int>, std::uint32_t> at;
  for (std::size_t i = 0; i < 16; ++i) {
    at[{static_cast<int>(c(i, 0)), static_cast<int>(c(i, 1))}] = c.labels()[i];
  }
  const int amps[4] = {-3, -1, 1, 3};
  for (int ix = 0; ix < 4; ++ix) {
    for (int iy = 0; iy < 4; ++iy) {
      ASSERT_TRUE(at.count(std::pair(amps[ix], amps[iy])));
      EXPECT_EQ(at[std::pair(amps[ix], amps[iy])], frozen::kQam16Labels[ix * 4 + iy]);
    }
  }
}

TEST(Generate, GaussianIsDeterministic) {
  const GenerateOptions opt{StartKind::Gaussian, 8, 1, 42};
  EXPECT_EQ(generate(opt), generate(opt));
  GenerateOptions other = opt;
  other.seed = 43;
  EXPECT_NE(generate(opt), generate(other));
}

TEST(Generate, InvalidCombinations) {
  EXPECT_THROW(generate({StartKind::Square, 8, 1, 0}), ParameterError);
  EXPECT_THROW(generate({StartKind::Square, 12, 1, 0}), ParameterError);
  EXPECT_THROW(generate({StartKind::Square, 1, 1, 0}), ParameterError);
  EXPECT_THROW(generate({StartKind::Square, 16, 0, 0}), ParameterError);
  GenerateOptions rings{StartKind::Ring, 16, 1, 0};
  rings.n_rings = 3;
  EXPECT_THROW(generate(rings), ParameterError);
}

TEST(Generate, LatticeCoversNonSquareSizes) {
  for (std::size_t M : {2u, 8u, 32u, 128u}) {
    const auto c = generate({StartKind::Lattice, M, 1, 0});
    EXPECT_EQ(c.size(), M);
  }
  EXPECT_EQ(generate({StartKind::Lattice, 64, 2, 0}).dims(), 4);
}

TEST(Generate, RingLayout) {
  GenerateOptions opt{StartKind::Ring, 64, 1, 0};
  const auto c = generate(opt);
  std::map<long, int> per_radius;
  for (std::size_t i = 0; i < c.size(); ++i) {
    per_radius[std::lround(1e6 * std::hypot(c(i, 0), c(i, 1)))]++;
  }
  // Default: 2^floor(m/2) = 8 rings of 8 points at radii 1..8.
  ASSERT_EQ(per_radius.size(), 8u);
  for (const auto& [r, n] : per_radius) EXPECT_EQ(n, 8);
  EXPECT_EQ(per_radius.begin()->first, 1000000);

  opt.n_rings = 2;
  const auto two = generate(opt);
  std::set<long> radii;
  for (std::size_t i = 0; i < two.size(); ++i) radii.insert(std::lround(1e6 * std::hypot(two(i, 0), two(i, 1))));
  EXPECT_EQ(radii.size(), 2u);

  const auto four_d = generate({StartKind::Ring, 256, 2, 0});
  EXPECT_EQ(four_d.size(), 256u);
}

TEST(Generate, OrthantSymmetricStarts) {
  for (auto kind : {StartKind::Square, StartKind::Ring, StartKind::Gaussian, StartKind::Lattice}) {
    GenerateOptions opt{kind, 64, 1, 9};
    opt.orthant_symmetric = true;
    const auto c = generate(opt);
    EXPECT_TRUE(is_orthant_symmetric(c)) << to_string(kind);
  }
  GenerateOptions four_d{StartKind::Square, 256, 2, 0};
  four_d.orthant_symmetric = true;
  EXPECT_TRUE(is_orthant_symmetric(generate(four_d)));
}

TEST(Generate, OrthantSquareKeepsGrayAdjacency) {
  GenerateOptions opt{StartKind::Square, 64, 1, 0};
  opt.orthant_symmetric = true;
  const auto c = generate(opt);
  int adjacent = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const double d = std::hypot(c(i, 0) - c(j, 0), c(i, 1) - c(j, 1));
      if (std::abs(d - 2.0) < 1e-12) {
        ++adjacent;
        EXPECT_EQ(hamming_distance(c.labels()[i], c.labels()[j]), 1);
      }
    }
  }
  EXPECT_EQ(adjacent, 2 * 8 * 7);
}

TEST(StartKind, Parse) {
  EXPECT_EQ(parse_start_kind("gaussian"), StartKind::Gaussian);
  EXPECT_EQ(to_string(StartKind::Ring), "ring");
  EXPECT_THROW(parse_start_kind("hex"), ParameterError);
}
