#pragma once

#include <cstddef>
#include <vector>

#include "intergat/graph.hpp"

namespace intergat {

/// Global min/max scaling record used to map speeds to [0, 1] and back.
struct Normalization {
  double min = 0.0;
  double max = 1.0;

  double range() const { return max - min; }
  double apply(double x) const { return (x - min) / range(); }
  double invert(double y) const { return y * range() + min; }
  Mat invert(const Mat& m) const;
};

/// Min/max over steps [first, last). Throws DataError for a constant segment.
Normalization fit_normalization(const SignalTensor& signal, std::size_t first, std::size_t last);
SignalTensor apply_normalization(const SignalTensor& signal, const Normalization& norm);
SignalTensor invert_normalization(const SignalTensor& signal, const Normalization& norm);

struct NormalizedSignal {
  SignalTensor signal;
  Normalization norm;
};
/// Scales the whole signal to [0, 1] with its own global min and max.
NormalizedSignal normalize(const SignalTensor& signal);

/// A window starting at `start`: inputs are frames [start, start+history),
/// targets are the following `horizon` frames.
struct Window {
  std::size_t start = 0;
};

struct WindowedDataset {
  SignalTensor signal;  // normalized
  Normalization norm;
  std::size_t history = 0;
  std::size_t horizon = 0;
  std::vector<Window> train;
  std::vector<Window> validation;  // trailing part of the training split
  std::vector<Window> test;

  std::vector<Mat> inputs(const Window& w) const;
  std::vector<Mat> targets(const Window& w) const;
  /// Index of the first target frame; split boundaries are chronological in this value.
  std::size_t target_time(const Window& w) const { return w.start + history; }
};

struct SplitOptions {
  std::size_t history = 12;
  std::size_t horizon = 1;
  double train_ratio = 0.8;
  /// Fraction of training windows held out (from the end) for early stopping.
  double validation_fraction = 0.1;
};

/// Stride-1 windows over a raw signal with a chronological train/test split.
/// T - history - horizon windows are formed; the first floor(ratio * count) go to
/// training. Normalization statistics are fitted on the frames touched by training
/// windows only and then applied to the whole signal.
WindowedDataset window_split(const SignalTensor& raw, const SplitOptions& options);

}  // namespace intergat
