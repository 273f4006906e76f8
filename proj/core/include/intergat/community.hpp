#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "intergat/graph.hpp"

namespace intergat {

struct Partition {
  std::size_t k = 0;
  std::vector<int> labels;  // in [0, k)
};

struct KMeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

/// k-means++ seeded Lloyd iterations on the rows of `points`, best inertia over
/// `restarts` runs. Deterministic for a given seed.
KMeansResult kmeans(const Mat& points, std::size_t k, std::uint64_t seed, std::size_t restarts = 50,
                    std::size_t max_iterations = 300);

/// Spectral embedding of the graph: the k eigenvectors of the symmetric normalized
/// Laplacian with the smallest eigenvalues, rows scaled to unit length.
class SpectralEmbedding {
 public:
  explicit SpectralEmbedding(const Graph& graph);
  /// First k columns, row-normalized. Throws UsageError unless 1 <= k <= N.
  Mat embed(std::size_t k) const;
  std::size_t nodes() const { return vectors_.rows(); }

 private:
  Mat vectors_;  // ascending eigenvalue order
};

/// Normalized spectral clustering of the adjacency. Throws UsageError unless 2 <= k <= N.
Partition spectral_cluster(const Graph& graph, std::size_t k, std::uint64_t seed);

/// Partitions for every k in [k_min, min(k_max, N)], sharing one eigendecomposition.
std::vector<Partition> spectral_partitions(const Graph& graph, std::size_t k_min, std::size_t k_max,
                                           std::uint64_t seed);

struct ContrastRow {
  std::size_t k = 0;
  double mu_intra = 0.0;
  double mu_inter = 0.0;
  double sigma_intra = 0.0;
  double sigma_inter = 0.0;
  double contrast = 0.0;
  double std = 0.0;
  /// False when the intra or inter pool is empty; such rows are excluded from summaries.
  bool valid = true;
};

inline constexpr double kContrastEpsilon = 1e-6;

/// Intra/inter statistics of `interaction` under `partition`, diagonal excluded.
/// With `absolute`, magnitudes |I_ij| are pooled instead of signed values.
ContrastRow contrast_row(const Mat& interaction, const Partition& partition, bool absolute = false);

struct ContrastTable {
  std::vector<ContrastRow> rows;
  double mean_contrast = 0.0;
  /// Population standard deviation of Contrast_k across valid rows.
  double contrast_std = 0.0;
  std::size_t valid_rows = 0;
};

ContrastTable contrast_table(const Mat& interaction, std::span<const Partition> partitions, bool absolute = false);

enum class Aggregation { mean, sum };
/// Elementwise mean or sum of per-head matrices.
Mat aggregate_interactions(std::span<const Mat> heads, Aggregation rule = Aggregation::mean);

}  // namespace intergat
