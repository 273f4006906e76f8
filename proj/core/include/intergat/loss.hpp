#pragma once

#include <span>
#include <vector>

#include "intergat/grad.hpp"
#include "intergat/spatial.hpp"

namespace intergat {

/// Batch of sequences: [sample][step] -> N x F frame.
using FrameBatch = std::vector<std::vector<Mat>>;

/// Mean squared error over samples, steps, nodes and features.
/// Throws DimensionError when shapes differ.
double mse_loss(std::span<const std::vector<Mat>> pred, std::span<const std::vector<Mat>> truth);
/// d(scale * mse)/d(pred).
FrameBatch mse_loss_gradient(std::span<const std::vector<Mat>> pred, std::span<const std::vector<Mat>> truth,
                             double scale = 1.0);

/// λ · Σ|I_ij| over the given raw matrices.
double l1_penalty(std::span<const Mat> raw, double lambda);
/// λ · Σ_heads Σ|I_ij| over a layer's raw interaction matrices (0 for other variants).
double l1_penalty(const InterGatLayer& layer, double lambda);
/// Adds λ·sign(I) (0 at exactly 0) to each head's interaction gradient.
void add_l1_subgradient(const InterGatLayer& layer, double lambda, GradSet& grads);

}  // namespace intergat
