#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "intergat/grad.hpp"

namespace intergat {

/// Bias-free GRU cell applied to every node row independently (optional gate biases).
///   z = σ(x Wz + h Uz)    r = σ(x Wr + h Ur)
///   c = tanh(x Wh + (r ⊙ h) Uh)    h' = (1 - z) ⊙ h + z ⊙ c
struct GruCell {
  Mat wz, wr, wh;  // input x hidden
  Mat uz, ur, uh;  // hidden x hidden
  Mat bz, br, bh;  // 1 x hidden, empty unless biases are enabled

  GruCell() = default;
  GruCell(std::size_t input, std::size_t hidden, bool biases, std::mt19937_64& rng);

  std::size_t input_size() const { return wz.rows(); }
  std::size_t hidden_size() const { return wz.cols(); }
  bool has_bias() const { return !bz.empty(); }

  void collect_parameters(std::vector<ParamRef>& out, const std::string& prefix);
};

struct GruCache {
  Mat x, h_prev, z, r, candidate;
};

Mat gru_step(const GruCell& cell, const Mat& x, const Mat& h_prev);
Mat gru_step(const GruCell& cell, const Mat& x, const Mat& h_prev, GruCache& cache);

struct GruStepGrads {
  Mat dx;
  Mat dh_prev;
};
/// Accumulates parameter gradients into `grads` under `prefix`.
GruStepGrads gru_step_backward(const GruCell& cell, const GruCache& cache, const Mat& dh,
                               GradSet& grads, const std::string& prefix);

/// Folds gru_step over `sequence` from a zero hidden state. Throws UsageError when empty.
Mat encode(const GruCell& cell, std::span<const Mat> sequence);

/// Affine readout hidden -> outputs applied per node.
struct Decoder {
  Mat weight;  // hidden x outputs
  Mat bias;    // 1 x outputs

  Decoder() = default;
  Decoder(std::size_t hidden, std::size_t outputs, std::mt19937_64& rng);

  Mat apply(const Mat& h) const;
  /// Returns dh; accumulates weight and bias gradients.
  Mat backward(const Mat& h, const Mat& dy, GradSet& grads, const std::string& prefix) const;
  void collect_parameters(std::vector<ParamRef>& out, const std::string& prefix);
};

}  // namespace intergat
