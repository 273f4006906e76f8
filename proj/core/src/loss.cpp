#include "intergat/loss.hpp"

#include <cmath>

#include "intergat/error.hpp"

namespace intergat {

namespace {

std::size_t check_batch(std::span<const std::vector<Mat>> pred, std::span<const std::vector<Mat>> truth) {
  if (pred.size() != truth.size()) throw DimensionError("loss: batch size mismatch");
  std::size_t count = 0;
  for (std::size_t b = 0; b < pred.size(); ++b) {
    if (pred[b].size() != truth[b].size()) throw DimensionError("loss: horizon mismatch");
    for (std::size_t t = 0; t < pred[b].size(); ++t) {
      require_same_shape(pred[b][t], truth[b][t], "loss");
      count += pred[b][t].size();
    }
  }
  if (count == 0) throw UsageError("loss: empty batch");
  return count;
}

}  // namespace

double mse_loss(std::span<const std::vector<Mat>> pred, std::span<const std::vector<Mat>> truth) {
  const std::size_t count = check_batch(pred, truth);
  double total = 0.0;
  for (std::size_t b = 0; b < pred.size(); ++b)
    for (std::size_t t = 0; t < pred[b].size(); ++t) {
      const auto p = pred[b][t].values();
      const auto y = truth[b][t].values();
      for (std::size_t i = 0; i < p.size(); ++i) total += (p[i] - y[i]) * (p[i] - y[i]);
    }
  return total / static_cast<double>(count);
}

FrameBatch mse_loss_gradient(std::span<const std::vector<Mat>> pred, std::span<const std::vector<Mat>> truth,
                             double scale) {
  const std::size_t count = check_batch(pred, truth);
  const double factor = 2.0 * scale / static_cast<double>(count);
  FrameBatch out(pred.size());
  for (std::size_t b = 0; b < pred.size(); ++b)
    for (std::size_t t = 0; t < pred[b].size(); ++t) out[b].push_back((pred[b][t] - truth[b][t]) * factor);
  return out;
}

double l1_penalty(std::span<const Mat> raw, double lambda) {
  double total = 0.0;
  for (const auto& m : raw) total += abs_sum(m);
  return lambda * total;
}

double l1_penalty(const InterGatLayer& layer, double lambda) {
  double total = 0.0;
  for (const auto& h : layer.heads()) total += abs_sum(h.interaction);
  return lambda * total;
}

void add_l1_subgradient(const InterGatLayer& layer, double lambda, GradSet& grads) {
  if (lambda == 0.0) return;
  const auto& heads = layer.heads();
  for (std::size_t k = 0; k < heads.size(); ++k) {
    const Mat& raw = heads[k].interaction;
    if (raw.empty()) continue;
    Mat g(raw.rows(), raw.cols());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double v = raw.values()[i];
      g.values()[i] = v > 0.0 ? lambda : (v < 0.0 ? -lambda : 0.0);
    }
    grads.accumulate(InterGatLayer::name(k, "I"), g);
  }
}

}  // namespace intergat
