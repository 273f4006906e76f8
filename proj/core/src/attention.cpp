#include "intergat/attention.hpp"

#include <cmath>
#include <limits>

#include "intergat/error.hpp"

namespace intergat {

Mat attention_mask(const Mat& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("attention_mask: adjacency must be square, got " + adjacency.shape_string());
  }
  const std::size_t n = adjacency.rows();
  Mat mask(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency(i, j) > 0.0) {
        mask(i, j) = 1.0;
        any = true;
      }
    }
    if (!any) mask(i, i) = 1.0;
  }
  return mask;
}

Mat gat_attention(const Mat& h, const Mat& a, const Mat& mask, double slope) {
  AttentionCache cache;
  return gat_attention(h, a, mask, slope, cache);
}

Mat gat_attention(const Mat& h, const Mat& a, const Mat& mask, double slope, AttentionCache& cache) {
  const std::size_t n = h.rows();
  const std::size_t d = h.cols();
  if (a.rows() != 2 * d || a.cols() != 1) {
    throw DimensionError("gat_attention: attention vector " + a.shape_string() + " does not match features " +
                         h.shape_string());
  }
  if (mask.rows() != n || mask.cols() != n) {
    throw DimensionError("gat_attention: mask " + mask.shape_string() + " does not match " + std::to_string(n) +
                         " nodes");
  }
  std::vector<double> src(n, 0.0), dst(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      src[i] += h(i, k) * a(k, 0);
      dst[i] += h(i, k) * a(d + k, 0);
    }
  }
  cache.logits = Mat(n, n);
  cache.attention = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0) continue;
      const double logit = src[i] + dst[j];
      cache.logits(i, j) = logit;
      const double e = logit > 0.0 ? logit : slope * logit;
      cache.attention(i, j) = e;
      mx = std::max(mx, e);
    }
    if (!std::isfinite(mx)) throw UsageError("gat_attention: row with empty neighborhood");
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0) continue;
      cache.attention(i, j) = std::exp(cache.attention(i, j) - mx);
      total += cache.attention(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) cache.attention(i, j) /= total;
  }
  return cache.attention;
}

AttentionGrads gat_attention_backward(const Mat& h, const Mat& a, const Mat& mask, double slope,
                                      const AttentionCache& cache, const Mat& d_attention) {
  const std::size_t n = h.rows();
  const std::size_t d = h.cols();
  const Mat& alpha = cache.attention;
  std::vector<double> d_src(n, 0.0), d_dst(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += alpha(i, j) * d_attention(i, j);
    for (std::size_t j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0) continue;
      double g = alpha(i, j) * (d_attention(i, j) - dot);
      if (cache.logits(i, j) <= 0.0) g *= slope;
      d_src[i] += g;
      d_dst[j] += g;
    }
  }
  AttentionGrads out{Mat(n, d), Mat(2 * d, 1)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      out.da(k, 0) += h(i, k) * d_src[i];
      out.da(d + k, 0) += h(i, k) * d_dst[i];
      out.dh(i, k) = d_src[i] * a(k, 0) + d_dst[i] * a(d + k, 0);
    }
  }
  return out;
}

}  // namespace intergat
