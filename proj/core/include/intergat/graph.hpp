#pragma once

#include <cstddef>
#include <vector>

#include "intergat/mat.hpp"

namespace intergat {

/// Static topology: a square, nonnegative adjacency matrix.
class Graph {
 public:
  Graph() = default;
  /// Validates squareness and nonnegativity; throws DimensionError / DataError.
  explicit Graph(Mat adjacency);

  std::size_t nodes() const { return adjacency_.rows(); }
  const Mat& adjacency() const { return adjacency_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_(i, j) > 0.0; }

  /// Component label per node, treating any nonzero entry in either direction as an edge.
  std::vector<int> components() const;
  bool connected() const;

 private:
  Mat adjacency_;
};

/// Time-major node signal: steps x nodes x features.
class SignalTensor {
 public:
  SignalTensor() = default;
  SignalTensor(std::size_t steps, std::size_t nodes, std::size_t features, std::vector<double> values);
  SignalTensor(std::size_t steps, std::size_t nodes, std::size_t features);

  std::size_t steps() const { return steps_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t features() const { return features_; }

  double& at(std::size_t t, std::size_t node, std::size_t f = 0) {
    return values_[(t * nodes_ + node) * features_ + f];
  }
  double at(std::size_t t, std::size_t node, std::size_t f = 0) const {
    return values_[(t * nodes_ + node) * features_ + f];
  }

  /// One time step as an N x F matrix.
  Mat frame(std::size_t t) const;
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  friend bool operator==(const SignalTensor&, const SignalTensor&) = default;

 private:
  std::size_t steps_ = 0;
  std::size_t nodes_ = 0;
  std::size_t features_ = 0;
  std::vector<double> values_;
};

}  // namespace intergat
