#include "intergat/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "intergat/error.hpp"

namespace intergat {

Mat Normalization::invert(const Mat& m) const {
  Mat out = m;
  for (double& v : out.values()) v = invert(v);
  return out;
}

Normalization fit_normalization(const SignalTensor& signal, std::size_t first, std::size_t last) {
  if (first >= last || last > signal.steps()) throw UsageError("fit_normalization: empty step range");
  const std::size_t per_step = signal.nodes() * signal.features();
  const auto begin = signal.values().begin() + static_cast<std::ptrdiff_t>(first * per_step);
  const auto end = signal.values().begin() + static_cast<std::ptrdiff_t>(last * per_step);
  const auto [lo, hi] = std::minmax_element(begin, end);
  if (!(*hi > *lo)) throw DataError("normalization: signal is constant, max must exceed min");
  return {*lo, *hi};
}

SignalTensor apply_normalization(const SignalTensor& signal, const Normalization& norm) {
  SignalTensor out = signal;
  for (double& v : out.values()) v = norm.apply(v);
  return out;
}

SignalTensor invert_normalization(const SignalTensor& signal, const Normalization& norm) {
  SignalTensor out = signal;
  for (double& v : out.values()) v = norm.invert(v);
  return out;
}

NormalizedSignal normalize(const SignalTensor& signal) {
  const Normalization norm = fit_normalization(signal, 0, signal.steps());
  return {apply_normalization(signal, norm), norm};
}

std::vector<Mat> WindowedDataset::inputs(const Window& w) const {
  std::vector<Mat> frames;
  frames.reserve(history);
  for (std::size_t t = 0; t < history; ++t) frames.push_back(signal.frame(w.start + t));
  return frames;
}

std::vector<Mat> WindowedDataset::targets(const Window& w) const {
  std::vector<Mat> frames;
  frames.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) frames.push_back(signal.frame(w.start + history + t));
  return frames;
}

WindowedDataset window_split(const SignalTensor& raw, const SplitOptions& options) {
  if (options.history == 0) throw UsageError("window_split: history must be >= 1");
  if (options.horizon == 0) throw UsageError("window_split: horizon must be >= 1");
  if (!(options.train_ratio > 0.0 && options.train_ratio < 1.0)) {
    throw UsageError("window_split: train ratio must lie in (0, 1)");
  }
  const std::size_t required = options.history + options.horizon + 1;
  if (raw.steps() < required) {
    std::ostringstream os;
    os << "window_split: " << raw.steps() << " steps available, at least " << required
       << " required for history " << options.history << " and horizon " << options.horizon;
    throw DataError(os.str());
  }
  const std::size_t count = raw.steps() - options.history - options.horizon;
  const auto n_train = static_cast<std::size_t>(std::floor(options.train_ratio * static_cast<double>(count)));
  if (n_train == 0) throw DataError("window_split: no training windows at this ratio");

  WindowedDataset ds;
  ds.history = options.history;
  ds.horizon = options.horizon;
  const std::size_t train_frames_end = (n_train - 1) + options.history + options.horizon;
  ds.norm = fit_normalization(raw, 0, train_frames_end);
  ds.signal = apply_normalization(raw, ds.norm);

  std::size_t n_val = static_cast<std::size_t>(std::floor(options.validation_fraction * static_cast<double>(n_train)));
  if (n_val == 0 && n_train >= 2 && options.validation_fraction > 0.0) n_val = 1;
  for (std::size_t w = 0; w < count; ++w) {
    if (w < n_train - n_val) {
      ds.train.push_back({w});
    } else if (w < n_train) {
      ds.validation.push_back({w});
    } else {
      ds.test.push_back({w});
    }
  }
  return ds;
}

}  // namespace intergat
