#include "intergat/graph.hpp"

#include <cmath>
#include <numeric>

#include "intergat/error.hpp"

namespace intergat {

Graph::Graph(Mat adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw DimensionError("Graph: adjacency must be square, got " + adjacency_.shape_string());
  }
  for (double v : adjacency_.values()) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("Graph: adjacency entries must be finite and >= 0");
  }
}

std::vector<int> Graph::components() const {
  const std::size_t n = nodes();
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] < 0 && (adjacency_(u, v) > 0.0 || adjacency_(v, u) > 0.0)) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

bool Graph::connected() const {
  const auto label = components();
  for (int l : label)
    if (l != 0) return false;
  return true;
}

SignalTensor::SignalTensor(std::size_t steps, std::size_t nodes, std::size_t features,
                           std::vector<double> values)
    : steps_(steps), nodes_(nodes), features_(features), values_(std::move(values)) {
  if (values_.size() != steps_ * nodes_ * features_) {
    throw DimensionError("SignalTensor: value count does not match steps x nodes x features");
  }
}

SignalTensor::SignalTensor(std::size_t steps, std::size_t nodes, std::size_t features)
    : steps_(steps), nodes_(nodes), features_(features), values_(steps * nodes * features, 0.0) {}

Mat SignalTensor::frame(std::size_t t) const {
  if (t >= steps_) throw UsageError("SignalTensor::frame: step out of range");
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(t * nodes_ * features_);
  return Mat(nodes_, features_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(nodes_ * features_)));
}

}  // namespace intergat
