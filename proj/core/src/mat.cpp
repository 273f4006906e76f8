#include "intergat/mat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "intergat/error.hpp"

namespace intergat {

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    std::ostringstream os;
    os << "Mat: " << data_.size() << " values do not fill a " << rows_ << "x" << cols_ << " matrix";
    throw DimensionError(os.str());
  }
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Mat: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Mat::shape_string() const {
  std::ostringstream os;
  os << "(" << rows_ << "x" << cols_ << ")";
  return os.str();
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat& Mat::operator+=(const Mat& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(Mat a, double s) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= s; }

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ, " + a.shape_string() + " x " +
                         b.shape_string());
  }
  Mat c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* bk = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: row counts differ, " + a.shape_string() + "^T x " +
                         b.shape_string());
  }
  Mat c(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* bk = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      double* ci = c.row(i).data();
      for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: column counts differ, " + a.shape_string() + " x " +
                         b.shape_string() + "^T");
  }
  Mat c(a.rows(), b.rows());
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.row(j).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += ai[k] * bj[k];
      c(i, j) = acc;
    }
  }
  return c;
}

Mat hadamard(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "hadamard");
  Mat c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] *= bv[i];
  return c;
}

Mat hconcat(std::span<const Mat> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const Mat& b : blocks) {
    if (b.rows() != rows) throw DimensionError("hconcat: row counts differ");
    cols += b.cols();
  }
  Mat out(rows, cols);
  std::size_t offset = 0;
  for (const Mat& b : blocks) {
    set_col_block(out, b, offset);
    offset += b.cols();
  }
  return out;
}

Mat col_block(const Mat& m, std::size_t first_col, std::size_t width) {
  if (first_col + width > m.cols()) throw DimensionError("col_block: range exceeds " + m.shape_string());
  Mat out(m.rows(), width);
  for (std::size_t i = 0; i < m.rows(); ++i)
    std::copy_n(m.row(i).data() + first_col, width, out.row(i).data());
  return out;
}

void set_col_block(Mat& dst, const Mat& src, std::size_t first_col) {
  if (src.rows() != dst.rows() || first_col + src.cols() > dst.cols()) {
    throw DimensionError("set_col_block: " + src.shape_string() + " does not fit " + dst.shape_string());
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    std::copy_n(src.row(i).data(), src.cols(), dst.row(i).data() + first_col);
}

Mat col_sums(const Mat& m) {
  Mat out(1, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(0, j) += m(i, j);
  return out;
}

Mat reshaped(Mat m, std::size_t rows, std::size_t cols) {
  if (rows * cols != m.size()) throw DimensionError("reshaped: element count mismatch");
  std::vector<double> data(m.values().begin(), m.values().end());
  return Mat(rows, cols, std::move(data));
}

double sum(const Mat& m) {
  double s = 0.0;
  for (double v : m.values()) s += v;
  return s;
}

double abs_sum(const Mat& m) {
  double s = 0.0;
  for (double v : m.values()) s += std::abs(v);
  return s;
}

double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Mat& m) {
  double s = 0.0;
  for (double v : m.values()) s = std::max(s, std::abs(v));
  return s;
}

double inf_norm(const Mat& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double trace(const Mat& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

bool all_finite(const Mat& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace intergat
