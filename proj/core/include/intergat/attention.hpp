#pragma once

#include "intergat/mat.hpp"

namespace intergat {

/// Neighborhood mask for masked attention: true where A_ij > 0, plus a self-loop for
/// every node whose row would otherwise be empty.
Mat attention_mask(const Mat& adjacency);

struct AttentionCache {
  Mat logits;     // aᵀ[h_i ‖ h_j] before LeakyReLU, 0 off the mask
  Mat attention;  // masked row softmax, exactly 0 off the mask
};

/// Masked GAT attention weights for projected features `h` (N x F') and attention
/// vector `a` (2F' x 1). Entries outside `mask` receive exactly zero weight.
Mat gat_attention(const Mat& h, const Mat& a, const Mat& mask, double slope, AttentionCache& cache);
Mat gat_attention(const Mat& h, const Mat& a, const Mat& mask, double slope);

struct AttentionGrads {
  Mat dh;
  Mat da;
};
/// Backpropagates `d_attention` through the masked softmax and LeakyReLU scores.
AttentionGrads gat_attention_backward(const Mat& h, const Mat& a, const Mat& mask, double slope,
                                      const AttentionCache& cache, const Mat& d_attention);

}  // namespace intergat
