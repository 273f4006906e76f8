#include "intergat/ops.hpp"

#include <algorithm>
#include <cmath>

#include "intergat/error.hpp"

namespace intergat {

Mat row_softmax(const Mat& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto in = m.row(i);
    auto o = out.row(i);
    const double mx = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      o[j] = std::exp(in[j] - mx);
      total += o[j];
    }
    for (double& v : o) v /= total;
  }
  return out;
}

Mat row_softmax_backward(const Mat& y, const Mat& dy) {
  require_same_shape(y, dy, "row_softmax_backward");
  Mat dx(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < y.cols(); ++j) dot += y(i, j) * dy(i, j);
    for (std::size_t j = 0; j < y.cols(); ++j) dx(i, j) = y(i, j) * (dy(i, j) - dot);
  }
  return dx;
}

Mat layer_norm_rows(const Mat& m, double eps) {
  LayerNormCache cache;
  return layer_norm_rows(m, eps, cache);
}

Mat layer_norm_rows(const Mat& m, double eps, LayerNormCache& cache) {
  if (m.cols() == 0) throw DimensionError("layer_norm_rows: matrix has no columns");
  const auto n = static_cast<double>(m.cols());
  Mat out(m.rows(), m.cols());
  cache.inv_std.assign(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto in = m.row(i);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= n;
    const double inv = 1.0 / std::sqrt(var + eps);
    cache.inv_std[i] = inv;
    auto o = out.row(i);
    for (std::size_t j = 0; j < in.size(); ++j) o[j] = (in[j] - mean) * inv;
  }
  cache.normalized = out;
  return out;
}

Mat layer_norm_rows_backward(const LayerNormCache& cache, const Mat& dy) {
  const Mat& xhat = cache.normalized;
  require_same_shape(xhat, dy, "layer_norm_rows_backward");
  const auto n = static_cast<double>(xhat.cols());
  Mat dx(xhat.rows(), xhat.cols());
  for (std::size_t i = 0; i < xhat.rows(); ++i) {
    double mean_dy = 0.0;
    double mean_dy_xhat = 0.0;
    for (std::size_t j = 0; j < xhat.cols(); ++j) {
      mean_dy += dy(i, j);
      mean_dy_xhat += dy(i, j) * xhat(i, j);
    }
    mean_dy /= n;
    mean_dy_xhat /= n;
    for (std::size_t j = 0; j < xhat.cols(); ++j)
      dx(i, j) = cache.inv_std[i] * (dy(i, j) - mean_dy - xhat(i, j) * mean_dy_xhat);
  }
  return dx;
}

Mat elu(const Mat& m, double alpha) {
  Mat out = m;
  for (double& v : out.values()) v = v > 0.0 ? v : alpha * std::expm1(v);
  return out;
}

Mat elu_backward(const Mat& x, const Mat& dy, double alpha) {
  require_same_shape(x, dy, "elu_backward");
  Mat dx = dy;
  auto xv = x.values();
  auto dv = dx.values();
  for (std::size_t i = 0; i < dv.size(); ++i)
    if (xv[i] <= 0.0) dv[i] *= alpha * std::exp(xv[i]);
  return dx;
}

Mat leaky_relu(const Mat& m, double slope) {
  Mat out = m;
  for (double& v : out.values()) v = v > 0.0 ? v : slope * v;
  return out;
}

Mat leaky_relu_backward(const Mat& x, const Mat& dy, double slope) {
  require_same_shape(x, dy, "leaky_relu_backward");
  Mat dx = dy;
  auto xv = x.values();
  auto dv = dx.values();
  for (std::size_t i = 0; i < dv.size(); ++i)
    if (xv[i] <= 0.0) dv[i] *= slope;
  return dx;
}

Mat sigmoid(const Mat& m) {
  Mat out = m;
  for (double& v : out.values()) {
    if (v >= 0.0) {
      v = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  return out;
}

Mat tanh(const Mat& m) {
  Mat out = m;
  for (double& v : out.values()) v = std::tanh(v);
  return out;
}

}  // namespace intergat
