#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spx/hadamard.hpp"

namespace spx {
namespace {

TEST(BuildMatrix, OrderTwo) {
  const auto h = build_matrix(1);
  ASSERT_EQ(h.order(), 2u);
  EXPECT_EQ(h(0, 0), 1);
  EXPECT_EQ(h(0, 1), 1);
  EXPECT_EQ(h(1, 0), 1);
  EXPECT_EQ(h(1, 1), -1);
}

TEST(BuildMatrix, OrderFour) {
  const int expected[4][4] = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  const auto h = build_matrix(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(h(i, j), expected[i][j]) << i << "," << j;
}

TEST(BuildMatrix, FirstRowAndColumnAllOnes) {
  for (unsigned k = 1; k <= 8; ++k) {
    const auto h = build_matrix(k);
    for (std::size_t j = 0; j < h.order(); ++j) {
      EXPECT_EQ(h(0, j), 1);
      EXPECT_EQ(h(j, 0), 1);
    }
  }
}

TEST(BuildMatrix, OrthogonalAndSymmetricUpTo64) {
  for (unsigned k = 1; k <= 6; ++k) {
    const auto h = build_matrix(k);
    const std::size_t N = h.order();
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        long dot = 0;
        for (std::size_t c = 0; c < N; ++c) dot += h(i, c) * h(j, c);
        EXPECT_EQ(dot, i == j ? static_cast<long>(N) : 0);
        EXPECT_EQ(h(i, j), h(j, i));
      }
    }
  }
}

TEST(BuildMatrix, MatchesDoublingOracleAndElementFormula) {
  for (unsigned k = 1; k <= 6; ++k) {
    const auto h = build_matrix(k);
    const auto ref = oracle::hadamard(h.order());
    for (std::size_t i = 0; i < h.order(); ++i) {
      for (std::size_t j = 0; j < h.order(); ++j) {
        EXPECT_EQ(h(i, j), ref[i][j]);
        EXPECT_EQ(hadamard_sign(i, j), ref[i][j]);
      }
    }
  }
}

TEST(BuildMatrix, RejectsZeroAndOversize) {
  EXPECT_THROW(build_matrix(0), SizeError);
  EXPECT_THROW(build_matrix(13), SizeError);
  EXPECT_THROW(build_matrix(5, 16), SizeError);
  EXPECT_NO_THROW(build_matrix(4, 16));
}

TEST(PatternFromRow, SmallExamples) {
  const auto p0 = pattern_from_row(2, 0).to_grid();
  EXPECT_EQ(p0, BinaryGrid(2, 2, std::vector<std::uint8_t>{1, 1, 1, 1}));
  const auto p1 = pattern_from_row(2, 1).to_grid();
  EXPECT_EQ(p1, BinaryGrid(2, 2, std::vector<std::uint8_t>{1, 0, 1, 0}));
  const auto p3 = pattern_from_row(2, 3).to_grid();
  EXPECT_EQ(p3, BinaryGrid(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(PatternFromRow, AgreesWithMatrixRows) {
  for (std::size_t n : {2u, 4u, 8u}) {
    const auto ref = oracle::hadamard(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      EXPECT_EQ(pattern_from_row(n, k).to_grid(), oracle::pattern(ref, n, k))
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(PatternFromRow, WideRowsCrossWordBoundary) {
  const std::size_t n = 128;
  for (std::size_t k : {0u, 1u, 127u, 128u, 8191u, 16383u}) {
    const Pattern p = pattern_from_row(n, k);
    for (std::size_t r = 0; r < n; r += 7) {
      for (std::size_t c = 0; c < n; ++c) {
        ASSERT_EQ(p.cell(r, c), hadamard_sign(k, r * n + c) == 1);
      }
    }
  }
}

TEST(PatternFromRow, ComplementAndZeroIndex) {
  const auto p = pattern_from_row(8, 37);
  const auto q = p.complement();
  EXPECT_EQ(q.polarity(), Polarity::complement);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) EXPECT_NE(p.cell(r, c), q.cell(r, c));
  EXPECT_EQ(p.white_count() + q.white_count(), 64u);
  EXPECT_EQ(pattern_from_row(16, 0).white_count(), 256u);
  EXPECT_EQ(q.complement(), p);
}

TEST(PatternFromRow, Errors) {
  EXPECT_THROW(pattern_from_row(3, 0), SizeError);
  EXPECT_THROW(pattern_from_row(4, 16), IndexError);
}

TEST(BinaryProfile, IsBinarizedMatrixRow) {
  const auto ref = oracle::hadamard(16);
  for (std::size_t j = 0; j < 16; ++j) {
    const auto p = binary_profile(16, j);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(p[i], ref[j][i] == 1);
  }
}

TEST(Fwht, Examples) {
  EXPECT_EQ(fwht(std::vector<double>{1, 0, 0, 0}), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_EQ(fwht(std::vector<double>{1, 1, 1, 1}), (std::vector<double>{4, 0, 0, 0}));
}

TEST(Fwht, InvolutionUpToScale) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (std::size_t N = 1; N <= 1024; N *= 2) {
    std::vector<double> v(N);
    for (auto& x : v) x = g(rng);
    const auto w = fwht(fwht(v));
    for (std::size_t i = 0; i < N; ++i) EXPECT_NEAR(w[i], N * v[i], 1e-9 * N);
  }
}

TEST(Fwht, MatchesNaiveMultiply) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (std::size_t N = 2; N <= 256; N *= 2) {
    const auto h = oracle::hadamard(N);
    std::vector<double> v(N);
    for (auto& x : v) x = u(rng);
    const auto got = fwht(v);
    const auto ref = oracle::matvec(h, v);
    for (std::size_t i = 0; i < N; ++i) EXPECT_NEAR(got[i], ref[i], 1e-9);
  }
}

TEST(Fwht, RejectsNonPowerOfTwo) {
  EXPECT_THROW(fwht(std::vector<double>(3)), SizeError);
  EXPECT_THROW(fwht(std::vector<double>{}), SizeError);
}

}  // namespace
}  // namespace spx
