#include "intergat/interaction.hpp"

#include "intergat/error.hpp"

namespace intergat {

Mat symmetrize(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("symmetrize: matrix must be square, got " + m.shape_string());
  Mat s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

Mat process_interaction(const Mat& raw, double eps, LayerNormAxis axis) {
  InteractionCache cache;
  return process_interaction(raw, eps, axis, cache);
}

Mat process_interaction(const Mat& raw, double eps, LayerNormAxis axis, InteractionCache& cache) {
  if (raw.rows() != raw.cols()) {
    throw DimensionError("process_interaction: interaction matrix must be square, got " + raw.shape_string());
  }
  const std::size_t n = raw.rows();
  cache.axis = axis;
  const Mat sym = symmetrize(raw);
  Mat normed;
  if (axis == LayerNormAxis::rows) {
    normed = layer_norm_rows(sym, eps, cache.norm);
  } else {
    normed = reshaped(layer_norm_rows(reshaped(sym, 1, n * n), eps, cache.norm), n, n);
  }
  cache.processed = row_softmax(normed);
  return cache.processed;
}

Mat process_interaction_backward(const InteractionCache& cache, const Mat& d_processed) {
  const std::size_t n = cache.processed.rows();
  const Mat d_normed = row_softmax_backward(cache.processed, d_processed);
  Mat d_sym;
  if (cache.axis == LayerNormAxis::rows) {
    d_sym = layer_norm_rows_backward(cache.norm, d_normed);
  } else {
    d_sym = reshaped(layer_norm_rows_backward(cache.norm, reshaped(d_normed, 1, n * n)), n, n);
  }
  return symmetrize(d_sym);
}

}  // namespace intergat
