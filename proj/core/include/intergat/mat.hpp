#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace intergat {

/// Dense row-major matrix of doubles.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<double> data);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Mat& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
  std::string shape_string() const;

  Mat transposed() const;

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(Mat a, double s);
Mat operator*(double s, Mat a);

/// Throws DimensionError naming both shapes unless `a` and `b` have identical shape.
void require_same_shape(const Mat& a, const Mat& b, const char* what);

// Products.
Mat matmul(const Mat& a, const Mat& b);
/// aᵀ·b without materializing the transpose.
Mat matmul_tn(const Mat& a, const Mat& b);
/// a·bᵀ without materializing the transpose.
Mat matmul_nt(const Mat& a, const Mat& b);

Mat hadamard(const Mat& a, const Mat& b);

// Structural helpers.
Mat hconcat(std::span<const Mat> blocks);
Mat col_block(const Mat& m, std::size_t first_col, std::size_t width);
void set_col_block(Mat& dst, const Mat& src, std::size_t first_col);
Mat col_sums(const Mat& m);
Mat reshaped(Mat m, std::size_t rows, std::size_t cols);

double sum(const Mat& m);
double abs_sum(const Mat& m);
double frobenius_norm(const Mat& m);
double max_abs(const Mat& m);
/// Maximum absolute row sum (the induced infinity norm).
double inf_norm(const Mat& m);
double trace(const Mat& m);
bool all_finite(const Mat& m);

}  // namespace intergat
