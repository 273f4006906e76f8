#include "intergat/grad.hpp"

#include "intergat/error.hpp"

namespace intergat {

void GradSet::accumulate(const std::string& name, const Mat& g) {
  slot(name, g.rows(), g.cols()) += g;
}

Mat& GradSet::slot(const std::string& name, std::size_t rows, std::size_t cols) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    index_.emplace(name, grads_.size());
    grads_.push_back({name, Mat(rows, cols)});
    return grads_.back().value;
  }
  Mat& m = grads_[it->second].value;
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError("GradSet: gradient for '" + name + "' has shape " + m.shape_string());
  }
  return m;
}

const Mat& GradSet::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw UsageError("no gradient recorded for '" + name + "'");
  return grads_[it->second].value;
}

Mat& GradSet::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw UsageError("no gradient recorded for '" + name + "'");
  return grads_[it->second].value;
}

GradSet& GradSet::operator+=(const GradSet& other) {
  for (const Grad& g : other.grads_) accumulate(g.param, g.value);
  return *this;
}

void GradSet::scale(double s) {
  for (Grad& g : grads_) g.value *= s;
}

}  // namespace intergat
