#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <intergat/error.hpp>
#include <intergat/spectra.hpp>

#include "support/oracles.hpp"

using namespace intergat;

namespace {

Mat random_symmetric(std::size_t n, std::mt19937_64& rng) {
  const Mat a = oracle::random_mat(n, n, rng);
  return (a + a.transposed()) * 0.5;
}

Mat reconstruct(const EigenDecomp& e) {
  const std::size_t n = e.values.size();
  Mat lv = e.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) lv(i, k) *= e.values[k];
  return matmul_nt(lv, e.vectors);
}

}  // namespace

TEST(SymEig, DiagonalMatrix) {
  const Mat d{{3, 0, 0}, {0, -1, 0}, {0, 0, 2}};
  const EigenDecomp e = sym_eig(d);
  EXPECT_EQ(e.values, (std::vector<double>{-1, 2, 3}));
  EXPECT_EQ(e.vector(0), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(e.vector(1), (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(e.vector(2), (std::vector<double>{1, 0, 0}));
}

TEST(SymEig, TwoByTwoClosedForm) {
  const EigenDecomp e = sym_eig(Mat{{0, 1}, {1, 0}});
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
}

TEST(SymEig, ReconstructsRandomMatrices) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 5u, 8u, 17u, 33u, 64u}) {
    const Mat m = random_symmetric(n, rng);
    const EigenDecomp e = sym_eig(m);
    EXPECT_LE(inf_norm(reconstruct(e) - m), 1e-9) << n;
    EXPECT_LE(inf_norm(matmul_tn(e.vectors, e.vectors) - Mat::identity(n)), 1e-8) << n;
    double total = 0.0;
    for (double v : e.values) total += v;
    EXPECT_NEAR(total, trace(m), 1e-9) << n;
    for (std::size_t k = 0; k + 1 < n; ++k) EXPECT_LE(e.values[k], e.values[k + 1]);
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = e.vector(k);
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mv = 0.0;
        for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * v[j];
        residual = std::max(residual, std::abs(mv - e.values[k] * v[i]));
      }
      EXPECT_LE(residual, 1e-8 * inf_norm(m));
    }
  }
}

TEST(SymEig, ThreeByThreeMatchesCharacteristicRoots) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat m = random_symmetric(3, rng);
    const auto roots = oracle::eig3(oracle::table(m));
    const EigenDecomp e = sym_eig(m);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], roots[k], 1e-10);
  }
}

TEST(SymEig, SignConventionLargestComponentPositive) {
  std::mt19937_64 rng(3);
  const EigenDecomp e = sym_eig(random_symmetric(10, rng));
  for (std::size_t k = 0; k < 10; ++k) {
    const auto v = e.vector(k);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    EXPECT_GT(v[arg], 0.0);
  }
}

TEST(SymEig, Deterministic) {
  std::mt19937_64 rng(4);
  const Mat m = random_symmetric(12, rng);
  const EigenDecomp a = sym_eig(m), b = sym_eig(m);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(SymEig, Errors) {
  EXPECT_THROW(sym_eig(Mat{{0, 1}, {0.5, 0}}), UsageError);
  EXPECT_THROW(sym_eig(Mat(2, 3)), DimensionError);
  std::mt19937_64 rng(5);
  EigOptions tight;
  tight.max_sweeps = 1;
  try {
    sym_eig(random_symmetric(20, rng), tight);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("off-diagonal"), std::string::npos) << e.what();
  }
}

TEST(Dirichlet, ConstantVectorHasZeroEnergy) {
  std::mt19937_64 rng(6);
  const Mat m = random_symmetric(7, rng);
  const std::vector<double> v(7, 1.0 / std::sqrt(7.0));
  EXPECT_NEAR(dirichlet_energy(v, m), 0.0, 1e-14);
}

TEST(Dirichlet, TwoNodeHandValue) {
  const std::vector<double> v{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
  EXPECT_NEAR(dirichlet_energy(v, Mat{{0, 1}, {1, 0}}), 2.0, 1e-15);
}

TEST(Dirichlet, QuadraticFormEqualsPairwiseSumForZeroDiagonal) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Mat m = random_symmetric(6, rng);
    for (std::size_t i = 0; i < 6; ++i) m(i, i) = 0.0;
    std::vector<double> v(6);
    for (double& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    EXPECT_NEAR(dirichlet_energy(v, m), oracle::dirichlet_pairwise(v, oracle::table(m)), 1e-10);
  }
}

TEST(Dirichlet, DiagonalDoesNotContribute) {
  // vᵀ(D - I)v is unchanged by the diagonal of I: D gains I_ii and I loses it.
  std::mt19937_64 rng(8);
  Mat m = random_symmetric(5, rng);
  std::vector<double> v(5);
  for (double& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
  const double with_diag = dirichlet_energy(v, m);
  for (std::size_t i = 0; i < 5; ++i) m(i, i) = 0.0;
  EXPECT_NEAR(with_diag, dirichlet_energy(v, m), 1e-12);
}

TEST(Dirichlet, LengthMismatchRejected) {
  EXPECT_THROW(dirichlet_energy(std::vector<double>{1.0}, Mat(2, 2)), DimensionError);
}

TEST(Ipr, Examples) {
  EXPECT_DOUBLE_EQ(ipr(std::vector<double>{0, 1, 0}), 1.0);
  EXPECT_NEAR(ipr(std::vector<double>(4, 0.5)), 0.25, 1e-15);
  EXPECT_NEAR(ipr(std::vector<double>{std::sqrt(0.5), std::sqrt(0.5), 0, 0}), 0.5, 1e-15);
}

TEST(Ipr, NonUnitInputPolicy) {
  EXPECT_THROW(ipr(std::vector<double>{1, 1}), UsageError);
  EXPECT_NEAR(ipr(std::vector<double>{1, 1}, NormPolicy::normalize), 0.5, 1e-15);
}

TEST(Ipr, BoundsOnRandomUnitVectors) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(9);
    double norm = 0.0;
    for (double& x : v) norm += (x = n(rng)) * x;
    for (double& x : v) x /= std::sqrt(norm);
    const double value = ipr(v);
    EXPECT_GE(value, 1.0 / 9.0 - 1e-15);
    EXPECT_LE(value, 1.0);
  }
}

TEST(Sparsity, Examples) {
  EXPECT_EQ(sparsity_fraction(Mat(3, 3)), 1.0);
  EXPECT_EQ(sparsity_fraction(Mat(3, 3, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(sparsity_fraction(Mat{{5e-5, -2e-4}, {0.3, -1e-6}}), 0.5);
}

TEST(Sparsity, NonDecreasingInThreshold) {
  std::mt19937_64 rng(10);
  const Mat m = oracle::random_mat(10, 10, rng, -1e-3, 1e-3);
  double last = 0.0;
  for (double thr = 1e-6; thr < 2e-3; thr *= 1.5) {
    const double s = sparsity_fraction(m, thr);
    EXPECT_GE(s, last);
    last = s;
  }
}

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(sym_eig(Mat::identity(5)).values), 5u);
  const std::vector<double> v{1, 2, -1, 0.5};
  Mat outer(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) outer(i, j) = v[i] * v[j];
  EXPECT_EQ(numeric_rank(sym_eig(outer).values), 1u);
  EXPECT_EQ(numeric_rank(std::vector<double>{0, 0, 0}), 0u);
}

TEST(SpectralReport, ConsistentLengths) {
  std::mt19937_64 rng(11);
  const Mat m = random_symmetric(8, rng);
  const SpectralReport r = analyze_spectrum(m);
  EXPECT_EQ(r.eigenvalues.size(), 8u);
  EXPECT_EQ(r.dirichlet.size(), 8u);
  EXPECT_EQ(r.ipr.size(), 8u);
  EXPECT_NEAR(r.trace, trace(m), 1e-15);
  EXPECT_EQ(r.rank, 8u);
}
