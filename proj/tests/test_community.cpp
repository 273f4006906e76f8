#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <intergat/community.hpp>
#include <intergat/error.hpp>
#include <intergat/synth.hpp>

#include "support/oracles.hpp"

using namespace intergat;

namespace {

Graph two_cliques(std::size_t a, std::size_t b) {
  const std::size_t n = a + b;
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && ((i < a) == (j < a))) m(i, j) = 1.0;
  return Graph(m);
}

Mat block_matrix(const std::vector<int>& labels, double intra, double inter) {
  const std::size_t n = labels.size();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = labels[i] == labels[j] ? intra : inter;
  return m;
}

}  // namespace

TEST(SpectralCluster, DisconnectedCliquesRecovered) {
  const Partition p = spectral_cluster(two_cliques(4, 5), 2, 1);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(p.labels[i], p.labels[0]);
  for (std::size_t i = 5; i < 9; ++i) EXPECT_EQ(p.labels[i], p.labels[4]);
  EXPECT_NE(p.labels[0], p.labels[4]);
}

TEST(SpectralCluster, KEqualsNGivesSingletons) {
  const auto syn = synth_community_traffic(8, 2, 10, 2);
  const Partition p = spectral_cluster(syn.graph, 8, 3);
  std::vector<int> seen(8, 0);
  for (int l : p.labels) ++seen[static_cast<std::size_t>(l)];
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(SpectralCluster, PlantedPartitionRecovered) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto syn = synth_community_traffic(40, 4, 10, seed);
    const Partition p = spectral_cluster(syn.graph, 4, seed);
    EXPECT_GE(oracle::adjusted_rand(p.labels, syn.community), 0.9) << "seed " << seed;
  }
}

TEST(SpectralCluster, DeterministicAndLabelsInRange) {
  const auto syn = synth_community_traffic(20, 4, 10, 9);
  const Partition a = spectral_cluster(syn.graph, 5, 11);
  const Partition b = spectral_cluster(syn.graph, 5, 11);
  EXPECT_EQ(a.labels, b.labels);
  for (int l : a.labels) {
    EXPECT_GE(l, 0);
    EXPECT_LT(l, 5);
  }
}

TEST(SpectralCluster, OutOfRangeK) {
  const auto syn = synth_community_traffic(6, 2, 10, 1);
  EXPECT_THROW(spectral_cluster(syn.graph, 1, 0), UsageError);
  EXPECT_THROW(spectral_cluster(syn.graph, 7, 0), UsageError);
}

TEST(SpectralPartitions, OnePerK) {
  const auto syn = synth_community_traffic(12, 3, 10, 4);
  const auto parts = spectral_partitions(syn.graph, 2, 32, 1);
  ASSERT_EQ(parts.size(), 11u);
  for (std::size_t i = 0; i < parts.size(); ++i) EXPECT_EQ(parts[i].k, i + 2);
}

TEST(KMeans, SeparatedBlobs) {
  Mat pts(6, 2);
  const double xs[6][2] = {{0, 0}, {0.1, 0}, {0, 0.1}, {5, 5}, {5.1, 5}, {5, 5.1}};
  for (std::size_t i = 0; i < 6; ++i) {
    pts(i, 0) = xs[i][0];
    pts(i, 1) = xs[i][1];
  }
  const auto r = kmeans(pts, 2, 1);
  EXPECT_EQ(r.labels[0], r.labels[2]);
  EXPECT_EQ(r.labels[3], r.labels[5]);
  EXPECT_NE(r.labels[0], r.labels[3]);
  EXPECT_NEAR(r.inertia, 0.08 / 3.0, 1e-12);
}

TEST(Contrast, BlockConstantMatrixIsDegenerateLarge) {
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const ContrastRow r = contrast_row(block_matrix(labels, 1.0, 0.0), Partition{2, labels});
  EXPECT_EQ(r.mu_intra, 1.0);
  EXPECT_EQ(r.mu_inter, 0.0);
  EXPECT_NEAR(r.contrast, 1e6, 1e-3);
  EXPECT_TRUE(r.valid);
}

TEST(Contrast, UniformMatrixHasZeroContrast) {
  const auto syn = synth_community_traffic(12, 3, 10, 5);
  const auto parts = spectral_partitions(syn.graph, 2, 8, 1);
  const ContrastTable t = contrast_table(Mat(12, 12, 0.37), parts);
  for (const auto& r : t.rows)
    if (r.valid) EXPECT_NEAR(r.contrast, 0.0, 1e-12);
}

TEST(Contrast, StatisticsMatchDirectPools) {
  std::mt19937_64 rng(6);
  const Mat m = oracle::random_mat(7, 7, rng, 0, 1);
  const std::vector<int> labels{0, 1, 0, 2, 1, 0, 2};
  const ContrastRow r = contrast_row(m, Partition{3, labels});
  std::vector<double> intra, inter;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      if (i != j) (labels[i] == labels[j] ? intra : inter).push_back(m(i, j));
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto sd = [&](const std::vector<double>& v) {
    const double mu = mean(v);
    double s = 0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
  };
  EXPECT_NEAR(r.mu_intra, mean(intra), 1e-15);
  EXPECT_NEAR(r.mu_inter, mean(inter), 1e-15);
  EXPECT_NEAR(r.sigma_intra, sd(intra), 1e-14);
  EXPECT_NEAR(r.sigma_inter, sd(inter), 1e-14);
  EXPECT_NEAR(r.contrast, (mean(intra) - mean(inter)) / (mean(inter) + 1e-6), 1e-12);
  EXPECT_NEAR(r.std, std::sqrt(sd(intra) * sd(intra) + sd(inter) * sd(inter)) / (mean(inter) + 1e-6), 1e-12);
}

TEST(Contrast, ScaleInvariant) {
  std::mt19937_64 rng(7);
  const Mat m = oracle::random_mat(10, 10, rng, 0.1, 1.0);
  const auto syn = synth_community_traffic(10, 2, 10, 8);
  const auto parts = spectral_partitions(syn.graph, 2, 5, 1);
  const ContrastTable a = contrast_table(m, parts);
  const ContrastTable b = contrast_table(m * 3.7, parts);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_NEAR(a.rows[i].contrast, b.rows[i].contrast, 1e-3);
}

TEST(Contrast, RelabelingInvariant) {
  std::mt19937_64 rng(9);
  const Mat m = oracle::random_mat(6, 6, rng);
  const std::vector<int> labels{0, 0, 1, 1, 2, 2}, relabeled{2, 2, 0, 0, 1, 1};
  const ContrastRow a = contrast_row(m, Partition{3, labels});
  const ContrastRow b = contrast_row(m, Partition{3, relabeled});
  EXPECT_EQ(a.mu_intra, b.mu_intra);
  EXPECT_EQ(a.mu_inter, b.mu_inter);
  EXPECT_EQ(a.contrast, b.contrast);
}

TEST(Contrast, SingletonPartitionRowExcluded) {
  std::mt19937_64 rng(10);
  const Mat m = oracle::random_mat(4, 4, rng, 0, 1);
  const std::vector<Partition> parts{{2, {0, 0, 1, 1}}, {4, {0, 1, 2, 3}}};
  const ContrastTable t = contrast_table(m, parts);
  EXPECT_TRUE(t.rows[0].valid);
  EXPECT_FALSE(t.rows[1].valid);
  EXPECT_EQ(t.valid_rows, 1u);
  EXPECT_EQ(t.mean_contrast, t.rows[0].contrast);
  EXPECT_EQ(t.contrast_std, 0.0);
}

TEST(Contrast, AbsoluteFlagPoolsMagnitudes) {
  const std::vector<int> labels{0, 0, 1, 1};
  Mat m = block_matrix(labels, -0.5, 0.25);
  const ContrastRow r = contrast_row(m, Partition{2, labels}, true);
  EXPECT_EQ(r.mu_intra, 0.5);
  EXPECT_EQ(r.mu_inter, 0.25);
}

TEST(Aggregate, MeanAndSum) {
  const std::vector<Mat> heads{Mat{{1, 2}}, Mat{{3, 6}}};
  EXPECT_EQ(aggregate_interactions(heads), (Mat{{2, 4}}));
  EXPECT_EQ(aggregate_interactions(heads, Aggregation::sum), (Mat{{4, 8}}));
}
