#pragma once

#include "intergat/mat.hpp"
#include "intergat/ops.hpp"

namespace intergat {

/// Axis over which the interaction matrix is layer-normalized before the row softmax.
enum class LayerNormAxis { rows, matrix };

/// ½(M + Mᵀ). The result is exactly symmetric in floating point.
Mat symmetrize(const Mat& m);

struct InteractionCache {
  LayerNormAxis axis = LayerNormAxis::rows;
  LayerNormCache norm;
  Mat processed;
};

/// softmax_rows(layer_norm(½(I + Iᵀ))). Throws DimensionError for non-square input.
Mat process_interaction(const Mat& raw, double eps = 1e-5, LayerNormAxis axis = LayerNormAxis::rows);
Mat process_interaction(const Mat& raw, double eps, LayerNormAxis axis, InteractionCache& cache);
/// Gradient w.r.t. the raw matrix given the gradient w.r.t. the processed one.
Mat process_interaction_backward(const InteractionCache& cache, const Mat& d_processed);

}  // namespace intergat
