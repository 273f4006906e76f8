#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <intergat/error.hpp>
#include <intergat/grad.hpp>
#include <intergat/mat.hpp>
#include <intergat/ops.hpp>

#include "support/oracles.hpp"

using namespace intergat;

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const Mat m{{1.5, -2.0}, {0.25, 4.0}};
  EXPECT_EQ(matmul(Mat::identity(2), m), m);
}

TEST(Matmul, HandArithmetic) {
  const Mat a{{1, 2}, {3, 4}};
  const Mat b{{0}, {1}};
  EXPECT_EQ(matmul(a, b), (Mat{{2}, {4}}));
}

TEST(Matmul, MatchesTripleLoop) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat a = oracle::random_mat(5, 3, rng);
    const Mat b = oracle::random_mat(3, 4, rng);
    EXPECT_LE(oracle::max_abs_diff(matmul(a, b), oracle::matmul(oracle::table(a), oracle::table(b))), 1e-12);
  }
}

TEST(Matmul, TransposedVariantsAgreeWithExplicitTranspose) {
  std::mt19937_64 rng(2);
  const Mat a = oracle::random_mat(4, 3, rng);
  const Mat b = oracle::random_mat(4, 5, rng);
  const Mat c = oracle::random_mat(6, 3, rng);
  EXPECT_LE(max_abs(matmul_tn(a, b) - matmul(a.transposed(), b)), 1e-14);
  EXPECT_LE(max_abs(matmul_nt(a, c) - matmul(a, c.transposed())), 1e-14);
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
  try {
    matmul(Mat(2, 3), Mat(2, 3));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
  }
}

TEST(Matmul, Associative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat a = oracle::random_mat(3, 4, rng), b = oracle::random_mat(4, 2, rng), c = oracle::random_mat(2, 5, rng);
    EXPECT_LE(max_abs(matmul(matmul(a, b), c) - matmul(a, matmul(b, c))), 1e-9);
  }
}

TEST(Matmul, PropagatesNaN) {
  Mat a{{0.0, 1.0}};
  Mat b{{NAN}, {1.0}};
  EXPECT_FALSE(all_finite(matmul(a, b)));
}

TEST(RowSoftmax, ZeroRowIsUniform) {
  const Mat s = row_softmax(Mat{{0, 0, 0}});
  for (double v : s.values()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(RowSoftmax, LargeLogitsDoNotOverflow) {
  const Mat s = row_softmax(Mat{{1000, 0}});
  EXPECT_TRUE(all_finite(s));
  EXPECT_NEAR(s(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(s(0, 1), 0.0, 1e-15);
}

TEST(RowSoftmax, MatchesExtendedPrecisionOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat m = oracle::random_mat(4, 4, rng, -5, 5);
    oracle::Table expected;
    for (const auto& row : oracle::table(m)) expected.push_back(oracle::softmax(row));
    EXPECT_LE(oracle::max_abs_diff(row_softmax(m), expected), 1e-12);
  }
}

TEST(RowSoftmax, RowsSumToOneAndShiftInvariant) {
  std::mt19937_64 rng(5);
  const Mat m = oracle::random_mat(6, 7, rng, -10, 10);
  const Mat s = row_softmax(m);
  Mat shifted = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) shifted(i, j) += 3.0 * static_cast<double>(i) - 7.5;
  const Mat s2 = row_softmax(shifted);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double total = 0.0;
    for (double v : s.row(i)) total += v;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  EXPECT_LE(max_abs(s - s2), 1e-9);
}

TEST(LayerNorm, ConstantRowMapsToZero) {
  const Mat out = layer_norm_rows(Mat{{5, 5, 5}}, 1e-5);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(LayerNorm, TwoPointRow) {
  const Mat out = layer_norm_rows(Mat{{0, 2}}, 0.0);
  EXPECT_NEAR(out(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(out(0, 1), 1.0, 1e-15);
}

TEST(LayerNorm, RowMomentsMatchDirectComputation) {
  std::mt19937_64 rng(6);
  const Mat m = oracle::random_mat(6, 9, rng, -3, 8);
  const Mat out = layer_norm_rows(m, 1e-12);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double mean = 0.0, var = 0.0;
    for (double v : out.row(i)) mean += v;
    mean /= 9.0;
    for (double v : out.row(i)) var += (v - mean) * (v - mean);
    var /= 9.0;
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_NEAR(var, 1.0, 1e-6);
  }
}

TEST(LayerNorm, AffineInvariantPerRow) {
  std::mt19937_64 rng(7);
  const Mat m = oracle::random_mat(5, 6, rng);
  Mat t = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double& v : t.row(i)) v = (0.5 + static_cast<double>(i)) * v + 2.0 - static_cast<double>(i);
  EXPECT_LE(max_abs(layer_norm_rows(m, 1e-12) - layer_norm_rows(t, 1e-12)), 1e-6);
}

TEST(Activations, EluValues) {
  const Mat out = elu(Mat{{0.0, 2.0, -1.0}}, 1.0);
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_EQ(out(0, 1), 2.0);
  EXPECT_NEAR(out(0, 2), std::exp(-1.0) - 1.0, 1e-15);
  EXPECT_NEAR(out(0, 2), -0.63212, 1e-5);
}

TEST(Activations, LeakyReluValues) {
  const Mat out = leaky_relu(Mat{{3.0, -2.0}}, 0.2);
  EXPECT_EQ(out(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(out(0, 1), -0.4);
  std::mt19937_64 rng(8);
  const Mat m = oracle::random_mat(5, 5, rng);
  const Mat r = leaky_relu(m, 0.2);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(r.values()[i], oracle::leaky(m.values()[i], 0.2));
}

namespace {

// FD check of a scalar function f(x) = <dy, op(x)> against op_backward.
template <typename Forward, typename Backward>
double check_op(Forward forward, Backward backward, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Mat x = oracle::random_mat(4, 5, rng, -2, 2);
  const Mat dy = oracle::random_mat(4, 5, rng);
  const Mat analytic = backward(x, dy);
  const Mat numeric = oracle::finite_difference(x, [&] { return sum(hadamard(forward(x), dy)); });
  return oracle::gradient_error(analytic, numeric, 1e-6);
}

}  // namespace

TEST(Backward, SoftmaxSumHasZeroGradient) {
  std::mt19937_64 rng(9);
  const Mat y = row_softmax(oracle::random_mat(3, 4, rng));
  const Mat g = row_softmax_backward(y, Mat(3, 4, 1.0));
  EXPECT_LE(max_abs(g), 1e-15);
}

TEST(Backward, ActivationsMatchFiniteDifferences) {
  EXPECT_LE(check_op([](const Mat& x) { return elu(x, 1.3); },
                     [](const Mat& x, const Mat& dy) { return elu_backward(x, dy, 1.3); }, 10),
            1e-6);
  EXPECT_LE(check_op([](const Mat& x) { return leaky_relu(x, 0.2); },
                     [](const Mat& x, const Mat& dy) { return leaky_relu_backward(x, dy, 0.2); }, 11),
            1e-6);
  EXPECT_LE(check_op([](const Mat& x) { return row_softmax(x); },
                     [](const Mat& x, const Mat& dy) { return row_softmax_backward(row_softmax(x), dy); }, 12),
            1e-6);
  EXPECT_LE(check_op([](const Mat& x) { return layer_norm_rows(x, 1e-5); },
                     [](const Mat& x, const Mat& dy) {
                       LayerNormCache cache;
                       layer_norm_rows(x, 1e-5, cache);
                       return layer_norm_rows_backward(cache, dy);
                     },
                     13),
            1e-6);
}

TEST(GradSet, UnknownParameterIsUsageError) {
  GradSet g;
  g.accumulate("a", Mat(2, 2, 1.0));
  EXPECT_TRUE(g.contains("a"));
  EXPECT_THROW(g.at("b"), UsageError);
}

TEST(GradSet, AccumulatesAndKeepsInsertionOrder) {
  GradSet g;
  g.accumulate("z", Mat(1, 2, 1.0));
  g.accumulate("a", Mat(1, 1, 2.0));
  g.accumulate("z", Mat(1, 2, 0.5));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.entries()[0].param, "z");
  EXPECT_EQ(g.at("z"), Mat(1, 2, 1.5));
  EXPECT_THROW(g.accumulate("a", Mat(2, 2)), DimensionError);
}

TEST(MatInvariants, OperationsOnFiniteInputsStayFinite) {
  std::mt19937_64 rng(14);
  const Mat a = oracle::random_mat(5, 5, rng, -50, 50);
  EXPECT_TRUE(all_finite(row_softmax(a)));
  EXPECT_TRUE(all_finite(layer_norm_rows(a, 1e-5)));
  EXPECT_TRUE(all_finite(elu(a)));
  EXPECT_TRUE(all_finite(sigmoid(a)));
  EXPECT_TRUE(all_finite(matmul(a, a)));
}
