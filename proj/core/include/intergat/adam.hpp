#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "intergat/grad.hpp"

namespace intergat {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Coupled L2 decay: weight_decay * θ is added to the gradient before the moments.
  double weight_decay = 1e-5;
};

struct AdamState {
  std::size_t step = 0;
  std::map<std::string, Mat> first;
  std::map<std::string, Mat> second;
};

/// One Adam update of every parameter in `params`. Parameters without a gradient in
/// `grads` are treated as having zero gradient.
void adam_step(std::vector<ParamRef>& params, const GradSet& grads, AdamState& state, const AdamConfig& config);

}  // namespace intergat
