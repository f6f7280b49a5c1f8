#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "gsc/errors.hpp"
#include "gsc/labeling.hpp"

using namespace gsc;

namespace {

std::vector<double> square_grid(int side) {
  std::vector<double> pts;
  for (int ix = 0; ix < side; ++ix) {
    for (int iy = 0; iy < side; ++iy) {
      pts.push_back(2.0 * ix - side + 1);
      pts.push_back(2.0 * iy - side + 1);
    }
  }
  return pts;
}

bool is_permutation_of_range(const std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != k) return false;
  }
  return true;
}

}  // namespace

TEST(Graymap, PublishedSequences) {
  EXPECT_EQ(graymap(2), (std::vector<std::uint32_t>{0, 1, 3, 2}));
  EXPECT_EQ(graymap(3), (std::vector<std::uint32_t>{0, 1, 3, 2, 6, 7, 5, 4}));
  EXPECT_EQ(graymap(0), (std::vector<std::uint32_t>{0}));
}

TEST(Graymap, OneBitStepsIncludingWrap) {
  for (int m = 1; m <= 13; ++m) {
    const auto g = graymap(m);
    ASSERT_EQ(g.size(), std::size_t{1} << m);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_EQ(hamming_distance(g[k], g[(k + 1) % g.size()]), 1) << "m=" << m << " k=" << k;
    }
  }
}

TEST(AssignLabels, SortedLineFollowsGraymap) {
  const std::vector<double> pts{-3, -1, 1, 3};
  EXPECT_EQ(assign_labels(pts, 1, BitAllocation{{2}}), (std::vector<std::uint32_t>{0, 1, 3, 2}));
  const std::vector<double> shuffled{1, -3, 3, -1};
  EXPECT_EQ(assign_labels(shuffled, 1, BitAllocation{{2}}),
            (std::vector<std::uint32_t>{3, 0, 2, 1}));
}

TEST(AssignLabels, SquareGridsAreGrayCoded) {
  for (int m : {4, 6, 8}) {
    const int side = 1 << (m / 2);
    const auto pts = square_grid(side);
    const auto labels = assign_labels(pts, 2, BitAllocation{{m / 2, m / 2}});
    ASSERT_TRUE(is_permutation_of_range(labels));
    for (int ix = 0; ix < side; ++ix) {
      for (int iy = 0; iy < side; ++iy) {
        const auto here = labels[ix * side + iy];
        if (ix + 1 < side) EXPECT_EQ(hamming_distance(here, labels[(ix + 1) * side + iy]), 1);
        if (iy + 1 < side) EXPECT_EQ(hamming_distance(here, labels[ix * side + iy + 1]), 1);
      }
    }
  }
}

TEST(AssignLabels, LabelsFollowPointsUnderShuffling) {
  std::mt19937_64 rng(11);
  const auto pts = square_grid(8);
  const BitAllocation alloc{{3, 3}};
  const auto ref = assign_labels(pts, 2, alloc);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::size_t> perm(64);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> moved(pts.size());
    for (std::size_t r = 0; r < 64; ++r) {
      moved[2 * r] = pts[2 * perm[r]];
      moved[2 * r + 1] = pts[2 * perm[r] + 1];
    }
    const auto got = assign_labels(moved, 2, alloc);
    for (std::size_t r = 0; r < 64; ++r) EXPECT_EQ(got[r], ref[perm[r]]);
  }
}

TEST(AssignLabels, BijectiveOnRandomPointSets) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int m = 1; m <= 10; ++m) {
    for (int dims : {1, 2, 3, 4}) {
      const std::size_t M = std::size_t{1} << m;
      std::vector<double> pts(M * dims);
      for (auto& v : pts) v = nd(rng);
      const auto alloc = default_allocation(m, dims);
      EXPECT_TRUE(is_permutation_of_range(assign_labels(pts, dims, alloc)));
      if (dims % 2 == 0) {
        EXPECT_TRUE(is_permutation_of_range(assign_labels_spherical(pts, dims, alloc)));
      }
    }
  }
}

TEST(AssignLabels, RejectsInconsistentAllocation) {
  const std::vector<double> pts{-3, -1, 1, 3};
  EXPECT_THROW(assign_labels(pts, 1, BitAllocation{{3}}), ParameterError);
  EXPECT_THROW(assign_labels(pts, 1, BitAllocation{{1, 1}}), ParameterError);
  EXPECT_THROW(assign_labels(std::vector<double>{1, 2, 3}, 1, BitAllocation{{1}}), ParameterError);
}

TEST(DefaultAllocation, EvenSplitWithLargerSharesFirst) {
  EXPECT_EQ(default_allocation(6, 2).bits_per_dim, (std::vector<int>{3, 3}));
  EXPECT_EQ(default_allocation(7, 2).bits_per_dim, (std::vector<int>{4, 3}));
  EXPECT_EQ(default_allocation(5, 4).bits_per_dim, (std::vector<int>{2, 1, 1, 1}));
  EXPECT_EQ(default_allocation(13, 2).total_bits(), 13);
}

TEST(Spherical, SingleRingFollowsGraymapInAngle) {
  std::vector<double> pts;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 8;
    pts.push_back(std::cos(a));
    pts.push_back(std::sin(a));
  }
  EXPECT_EQ(assign_labels_spherical(pts, 2, BitAllocation{{0, 3}}), graymap(3));
}

TEST(Spherical, TwoRingsMsbSelectsRing) {
  // Rows listed outer ring first, phases descending, to exercise the sort.
  std::vector<double> pts;
  std::vector<int> ring, phase;
  for (int r : {2, 1}) {
    for (int k = 3; k >= 0; --k) {
      const double a = (k + 0.5) * std::numbers::pi / 2;
      pts.push_back(r * std::cos(a));
      pts.push_back(r * std::sin(a));
      ring.push_back(r - 1);
      phase.push_back(k);
    }
  }
  const auto labels = assign_labels_spherical(pts, 2, BitAllocation{{1, 2}});
  const auto g = graymap(2);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(labels[i] >> 2, static_cast<std::uint32_t>(ring[i]));
    EXPECT_EQ(labels[i] & 3u, g[phase[i]]);
  }
}

TEST(Spherical, QpskMatchesCartesianUpToBitRoles) {
  const std::vector<double> pts{-1, -1, -1, 1, 1, -1, 1, 1};
  const auto cart = assign_labels(pts, 2, BitAllocation{{1, 1}});
  const auto sph = assign_labels_spherical(pts, 2, BitAllocation{{0, 2}});
  // Look for a bit permutation and complement mask taking one labelling to the other.
  bool found = false;
  for (bool swap : {false, true}) {
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
      bool ok = true;
      for (std::size_t i = 0; i < 4; ++i) {
        std::uint32_t l = cart[i];
        if (swap) l = ((l & 1u) << 1) | (l >> 1);
        ok = ok && ((l ^ mask) == sph[i]);
      }
      found = found || ok;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Spherical, CoordinatesAndOriginConvention) {
  const std::vector<double> pts{0, 0, 0, 2, -1, 0};
  const auto s = to_spherical(pts, 2);
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_DOUBLE_EQ(s[1], 0.0);
  EXPECT_DOUBLE_EQ(s[2], 2.0);
  EXPECT_DOUBLE_EQ(s[3], std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(s[5], std::numbers::pi);

  // 4D: radius, amplitude split angle, two phases in [0, 2 pi).
  const std::vector<double> p4{3, 0, 0, -4};
  const auto s4 = to_spherical(p4, 4);
  EXPECT_DOUBLE_EQ(s4[0], 5.0);
  EXPECT_DOUBLE_EQ(s4[1], std::atan2(4.0, 3.0));
  EXPECT_DOUBLE_EQ(s4[2], 0.0);
  EXPECT_DOUBLE_EQ(s4[3], 1.5 * std::numbers::pi);
}

TEST(LabelBasis, ParseRoundTrip) {
  EXPECT_EQ(parse_label_basis("cartesian"), LabelBasis::Cartesian);
  EXPECT_EQ(parse_label_basis(to_string(LabelBasis::Spherical)), LabelBasis::Spherical);
  EXPECT_THROW(parse_label_basis("polar"), ParameterError);
}
