#include "intergat/community.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "intergat/error.hpp"
#include "intergat/spectra.hpp"

namespace intergat {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

KMeansResult lloyd(const Mat& points, Mat centers, std::size_t max_iterations) {
  const std::size_t n = points.rows();
  const std::size_t k = centers.rows();
  const std::size_t d = points.cols();
  KMeansResult res;
  res.labels.assign(n, -1);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_distance(points.row(i), centers.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    // Recompute centers; an empty cluster takes the point farthest from its center.
    Mat sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.labels[i]);
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) sums(c, j) += points(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const auto own = static_cast<std::size_t>(res.labels[i]);
          if (counts[own] <= 1) continue;
          const double dist = squared_distance(points.row(i), centers.row(own));
          if (dist > far_d) {
            far_d = dist;
            far = i;
          }
        }
        if (far_d < 0.0) continue;
        --counts[static_cast<std::size_t>(res.labels[far])];
        res.labels[far] = static_cast<int>(c);
        counts[c] = 1;
        for (std::size_t j = 0; j < d; ++j) centers(c, j) = points(far, j);
        changed = true;
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
    if (!changed) break;
  }
  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    res.inertia += squared_distance(points.row(i), centers.row(static_cast<std::size_t>(res.labels[i])));
  return res;
}

Mat kmeans_plus_plus(const Mat& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  Mat centers(k, points.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t first = pick(rng);
  std::copy(points.row(first).begin(), points.row(first).end(), centers.row(0).begin());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centers.row(c - 1)));
      total += nearest[i];
    }
    std::size_t chosen = pick(rng);
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      for (std::size_t i = 0; i < n; ++i) {
        target -= nearest[i];
        if (target <= 0.0 && nearest[i] > 0.0) {
          chosen = i;
          break;
        }
      }
      if (nearest[chosen] == 0.0) {
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    }
    std::copy(points.row(chosen).begin(), points.row(chosen).end(), centers.row(c).begin());
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Mat& points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                    std::size_t max_iterations) {
  if (k == 0 || k > points.rows()) throw UsageError("kmeans: k must lie in [1, number of points]");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    KMeansResult res = lloyd(points, kmeans_plus_plus(points, k, rng), max_iterations);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

SpectralEmbedding::SpectralEmbedding(const Graph& graph) {
  const std::size_t n = graph.nodes();
  const Mat& a = graph.adjacency();
  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += 0.5 * (a(i, j) + a(j, i));
    inv_sqrt_degree[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  Mat laplacian = Mat::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      laplacian(i, j) -= 0.5 * (a(i, j) + a(j, i)) * inv_sqrt_degree[i] * inv_sqrt_degree[j];
  vectors_ = sym_eig(laplacian).vectors;
}

Mat SpectralEmbedding::embed(std::size_t k) const {
  if (k == 0 || k > nodes()) throw UsageError("spectral embedding: k out of range");
  Mat u = col_block(vectors_, 0, k);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    double norm = 0.0;
    for (double x : u.row(i)) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : u.row(i)) x /= norm;
  }
  return u;
}

Partition spectral_cluster(const Graph& graph, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > graph.nodes()) {
    throw UsageError("spectral_cluster: k = " + std::to_string(k) + " outside [2, " + std::to_string(graph.nodes()) +
                     "]");
  }
  return spectral_partitions(graph, k, k, seed).front();
}

std::vector<Partition> spectral_partitions(const Graph& graph, std::size_t k_min, std::size_t k_max,
                                           std::uint64_t seed) {
  k_max = std::min(k_max, graph.nodes());
  if (k_min < 2 || k_min > k_max) throw UsageError("spectral_partitions: empty k range");
  const SpectralEmbedding embedding(graph);
  std::vector<Partition> out;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    KMeansResult res = kmeans(embedding.embed(k), k, seed + k);
    out.push_back({k, std::move(res.labels)});
  }
  return out;
}

ContrastRow contrast_row(const Mat& interaction, const Partition& partition, bool absolute) {
  const std::size_t n = interaction.rows();
  if (interaction.cols() != n || partition.labels.size() != n) {
    throw DimensionError("contrast_row: partition of " + std::to_string(partition.labels.size()) +
                         " nodes vs matrix " + interaction.shape_string());
  }
  double s_in = 0.0, ss_in = 0.0, s_out = 0.0, ss_out = 0.0;
  std::size_t c_in = 0, c_out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = absolute ? std::abs(interaction(i, j)) : interaction(i, j);
      if (partition.labels[i] == partition.labels[j]) {
        s_in += x;
        ss_in += x * x;
        ++c_in;
      } else {
        s_out += x;
        ss_out += x * x;
        ++c_out;
      }
    }
  }
  ContrastRow row;
  row.k = partition.k;
  if (c_in == 0 || c_out == 0) {
    row.valid = false;
    return row;
  }
  row.mu_intra = s_in / static_cast<double>(c_in);
  row.mu_inter = s_out / static_cast<double>(c_out);
  row.sigma_intra = std::sqrt(std::max(0.0, ss_in / static_cast<double>(c_in) - row.mu_intra * row.mu_intra));
  row.sigma_inter = std::sqrt(std::max(0.0, ss_out / static_cast<double>(c_out) - row.mu_inter * row.mu_inter));
  const double denom = row.mu_inter + kContrastEpsilon;
  row.contrast = (row.mu_intra - row.mu_inter) / denom;
  row.std = std::sqrt(row.sigma_intra * row.sigma_intra + row.sigma_inter * row.sigma_inter) / denom;
  return row;
}

ContrastTable contrast_table(const Mat& interaction, std::span<const Partition> partitions, bool absolute) {
  ContrastTable table;
  double s = 0.0, ss = 0.0;
  for (const Partition& p : partitions) {
    table.rows.push_back(contrast_row(interaction, p, absolute));
    const ContrastRow& r = table.rows.back();
    if (!r.valid) continue;
    ++table.valid_rows;
    s += r.contrast;
    ss += r.contrast * r.contrast;
  }
  if (table.valid_rows > 0) {
    const auto m = static_cast<double>(table.valid_rows);
    table.mean_contrast = s / m;
    table.contrast_std = std::sqrt(std::max(0.0, ss / m - table.mean_contrast * table.mean_contrast));
  }
  return table;
}

Mat aggregate_interactions(std::span<const Mat> heads, Aggregation rule) {
  if (heads.empty()) throw UsageError("aggregate_interactions: no matrices");
  Mat out(heads.front().rows(), heads.front().cols());
  for (const Mat& h : heads) out += h;
  if (rule == Aggregation::mean) out *= 1.0 / static_cast<double>(heads.size());
  return out;
}

}  // namespace intergat
