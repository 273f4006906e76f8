#pragma once

#include <vector>

#include "intergat/mat.hpp"

namespace intergat {

/// Row-wise softmax with per-row max subtraction.
Mat row_softmax(const Mat& m);
/// Gradient of row_softmax given its output `y` and upstream `dy`.
Mat row_softmax_backward(const Mat& y, const Mat& dy);

/// Cached intermediates of layer_norm_rows needed by its backward pass.
struct LayerNormCache {
  Mat normalized;
  std::vector<double> inv_std;  // 1/sqrt(var + eps), one per row
};

/// (x - mean) / sqrt(var + eps) per row, population variance, no affine parameters.
Mat layer_norm_rows(const Mat& m, double eps);
Mat layer_norm_rows(const Mat& m, double eps, LayerNormCache& cache);
Mat layer_norm_rows_backward(const LayerNormCache& cache, const Mat& dy);

Mat elu(const Mat& m, double alpha = 1.0);
/// Gradient of elu evaluated at the pre-activation `x`.
Mat elu_backward(const Mat& x, const Mat& dy, double alpha = 1.0);

Mat leaky_relu(const Mat& m, double slope = 0.2);
Mat leaky_relu_backward(const Mat& x, const Mat& dy, double slope = 0.2);

Mat sigmoid(const Mat& m);
Mat tanh(const Mat& m);

}  // namespace intergat
