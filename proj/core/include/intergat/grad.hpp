#pragma once

#include <map>
#include <string>
#include <vector>

#include "intergat/mat.hpp"

namespace intergat {

/// Gradient for one named parameter; shape always equals the parameter's shape.
struct Grad {
  std::string param;
  Mat value;
};

/// Gradients keyed by parameter name. Iteration order is the insertion order.
class GradSet {
 public:
  /// Adds `g` into the entry for `name`, creating it on first use.
  void accumulate(const std::string& name, const Mat& g);
  /// Zero-initialized slot for `name` with the given shape.
  Mat& slot(const std::string& name, std::size_t rows, std::size_t cols);

  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  /// Throws UsageError when `name` was never recorded.
  const Mat& at(const std::string& name) const;
  Mat& at(const std::string& name);

  const std::vector<Grad>& entries() const { return grads_; }
  std::size_t size() const { return grads_.size(); }

  GradSet& operator+=(const GradSet& other);
  void scale(double s);

 private:
  std::vector<Grad> grads_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace intergat

namespace intergat {

/// Mutable handle on a named learnable parameter.
struct ParamRef {
  std::string name;
  Mat* value = nullptr;
};

}  // namespace intergat
