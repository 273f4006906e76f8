#include "intergat/gru.hpp"

#include <cmath>

#include "intergat/error.hpp"
#include "intergat/ops.hpp"

namespace intergat {
namespace {

Mat uniform(std::size_t rows, std::size_t cols, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Mat m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

void add_row_bias(Mat& m, const Mat& bias) {
  if (bias.empty()) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += bias(0, j);
}

}  // namespace

GruCell::GruCell(std::size_t input, std::size_t hidden, bool biases, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  wz = uniform(input, hidden, bound, rng);
  wr = uniform(input, hidden, bound, rng);
  wh = uniform(input, hidden, bound, rng);
  uz = uniform(hidden, hidden, bound, rng);
  ur = uniform(hidden, hidden, bound, rng);
  uh = uniform(hidden, hidden, bound, rng);
  if (biases) {
    bz = Mat(1, hidden);
    br = Mat(1, hidden);
    bh = Mat(1, hidden);
  }
}

void GruCell::collect_parameters(std::vector<ParamRef>& out, const std::string& prefix) {
  out.push_back({prefix + "Wz", &wz});
  out.push_back({prefix + "Wr", &wr});
  out.push_back({prefix + "Wh", &wh});
  out.push_back({prefix + "Uz", &uz});
  out.push_back({prefix + "Ur", &ur});
  out.push_back({prefix + "Uh", &uh});
  if (has_bias()) {
    out.push_back({prefix + "bz", &bz});
    out.push_back({prefix + "br", &br});
    out.push_back({prefix + "bh", &bh});
  }
}

Mat gru_step(const GruCell& cell, const Mat& x, const Mat& h_prev) {
  GruCache cache;
  return gru_step(cell, x, h_prev, cache);
}

Mat gru_step(const GruCell& cell, const Mat& x, const Mat& h_prev, GruCache& cache) {
  if (x.cols() != cell.input_size() || h_prev.cols() != cell.hidden_size() || x.rows() != h_prev.rows()) {
    throw DimensionError("gru_step: input " + x.shape_string() + " / state " + h_prev.shape_string() +
                         " do not fit cell (" + std::to_string(cell.input_size()) + " -> " +
                         std::to_string(cell.hidden_size()) + ")");
  }
  Mat az = matmul(x, cell.wz) + matmul(h_prev, cell.uz);
  Mat ar = matmul(x, cell.wr) + matmul(h_prev, cell.ur);
  add_row_bias(az, cell.bz);
  add_row_bias(ar, cell.br);
  cache.z = sigmoid(az);
  cache.r = sigmoid(ar);
  Mat ac = matmul(x, cell.wh) + matmul(hadamard(cache.r, h_prev), cell.uh);
  add_row_bias(ac, cell.bh);
  cache.candidate = tanh(ac);
  cache.x = x;
  cache.h_prev = h_prev;
  Mat h = h_prev;
  auto hv = h.values();
  auto zv = cache.z.values();
  auto cv = cache.candidate.values();
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = (1.0 - zv[i]) * hv[i] + zv[i] * cv[i];
  return h;
}

GruStepGrads gru_step_backward(const GruCell& cell, const GruCache& cache, const Mat& dh, GradSet& grads,
                               const std::string& prefix) {
  const std::size_t rows = dh.rows();
  const std::size_t hidden = dh.cols();
  Mat da_z(rows, hidden), da_r(rows, hidden), da_c(rows, hidden);
  Mat dh_prev(rows, hidden);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < hidden; ++j) {
      const double z = cache.z(i, j);
      const double c = cache.candidate(i, j);
      const double g = dh(i, j);
      da_z(i, j) = g * (c - cache.h_prev(i, j)) * z * (1.0 - z);
      da_c(i, j) = g * z * (1.0 - c * c);
      dh_prev(i, j) = g * (1.0 - z);
    }
  }
  const Mat rh = hadamard(cache.r, cache.h_prev);
  const Mat d_rh = matmul_nt(da_c, cell.uh);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < hidden; ++j) {
      const double r = cache.r(i, j);
      da_r(i, j) = d_rh(i, j) * cache.h_prev(i, j) * r * (1.0 - r);
      dh_prev(i, j) += d_rh(i, j) * r;
    }
  }
  grads.accumulate(prefix + "Wz", matmul_tn(cache.x, da_z));
  grads.accumulate(prefix + "Wr", matmul_tn(cache.x, da_r));
  grads.accumulate(prefix + "Wh", matmul_tn(cache.x, da_c));
  grads.accumulate(prefix + "Uz", matmul_tn(cache.h_prev, da_z));
  grads.accumulate(prefix + "Ur", matmul_tn(cache.h_prev, da_r));
  grads.accumulate(prefix + "Uh", matmul_tn(rh, da_c));
  if (cell.has_bias()) {
    grads.accumulate(prefix + "bz", col_sums(da_z));
    grads.accumulate(prefix + "br", col_sums(da_r));
    grads.accumulate(prefix + "bh", col_sums(da_c));
  }
  dh_prev += matmul_nt(da_z, cell.uz);
  dh_prev += matmul_nt(da_r, cell.ur);
  Mat dx = matmul_nt(da_z, cell.wz);
  dx += matmul_nt(da_r, cell.wr);
  dx += matmul_nt(da_c, cell.wh);
  return {std::move(dx), std::move(dh_prev)};
}

Mat encode(const GruCell& cell, std::span<const Mat> sequence) {
  if (sequence.empty()) throw UsageError("encode: empty input sequence");
  Mat h(sequence.front().rows(), cell.hidden_size());
  for (const Mat& x : sequence) h = gru_step(cell, x, h);
  return h;
}

Decoder::Decoder(std::size_t hidden, std::size_t outputs, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  weight = uniform(hidden, outputs, bound, rng);
  bias = Mat(1, outputs);
}

Mat Decoder::apply(const Mat& h) const {
  Mat y = matmul(h, weight);
  add_row_bias(y, bias);
  return y;
}

Mat Decoder::backward(const Mat& h, const Mat& dy, GradSet& grads, const std::string& prefix) const {
  grads.accumulate(prefix + "W", matmul_tn(h, dy));
  grads.accumulate(prefix + "b", col_sums(dy));
  return matmul_nt(dy, weight);
}

void Decoder::collect_parameters(std::vector<ParamRef>& out, const std::string& prefix) {
  out.push_back({prefix + "W", &weight});
  out.push_back({prefix + "b", &bias});
}

}  // namespace intergat
