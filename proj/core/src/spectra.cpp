#include "intergat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "intergat/error.hpp"

namespace intergat {
namespace {

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void rotate(Mat& a, Mat& v, std::size_t p, std::size_t q, double c, double s) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

std::vector<double> EigenDecomp::vector(std::size_t k) const {
  std::vector<double> out(vectors.rows());
  for (std::size_t i = 0; i < vectors.rows(); ++i) out[i] = vectors(i, k);
  return out;
}

EigenDecomp sym_eig(const Mat& m, const EigOptions& options) {
  if (m.rows() != m.cols()) throw DimensionError("sym_eig: matrix must be square, got " + m.shape_string());
  const std::size_t n = m.rows();
  const double scale = std::max(max_abs(m), 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > options.symmetry_tolerance * scale) {
        throw UsageError("sym_eig: matrix is not symmetric; symmetrize it first");
      }
    }
  }

  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Mat v = Mat::identity(n);
  const double target = options.tolerance * std::max(frobenius_norm(a), 1e-300);

  bool converged = false;
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Past the first sweeps, entries negligible against both diagonals are dropped.
        if (sweep > 3 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        rotate(a, v, p, q, c, s);
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > target) {
    std::ostringstream os;
    os << "sym_eig: no convergence after " << options.max_sweeps << " sweeps, off-diagonal residual "
       << off_diagonal_norm(a);
    throw NumericError(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomp out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(pivot, src))) pivot = i;
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

double dirichlet_energy(std::span<const double> v, const Mat& interaction) {
  const std::size_t n = interaction.rows();
  if (interaction.cols() != n || v.size() != n) {
    throw DimensionError("dirichlet_energy: vector length " + std::to_string(v.size()) + " vs matrix " +
                         interaction.shape_string());
  }
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    double mixed = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      degree += interaction(i, j);
      mixed += interaction(i, j) * v[j];
    }
    energy += v[i] * (degree * v[i] - mixed);
  }
  return energy;
}

double ipr(std::span<const double> v, NormPolicy policy) {
  double norm2 = 0.0;
  double fourth = 0.0;
  for (double x : v) {
    norm2 += x * x;
    fourth += x * x * x * x;
  }
  if (std::abs(std::sqrt(norm2) - 1.0) <= 1e-9) return fourth;
  if (policy == NormPolicy::reject || norm2 == 0.0) throw UsageError("ipr: vector is not unit-normalized");
  return fourth / (norm2 * norm2);
}

double sparsity_fraction(const Mat& m, double threshold) {
  if (!(threshold > 0.0)) throw UsageError("sparsity_fraction: threshold must be positive");
  if (m.empty()) return 0.0;
  std::size_t small = 0;
  for (double x : m.values())
    if (std::abs(x) < threshold) ++small;
  return static_cast<double>(small) / static_cast<double>(m.size());
}

std::size_t numeric_rank(std::span<const double> eigenvalues, double tolerance) {
  double top = 0.0;
  for (double x : eigenvalues) top = std::max(top, std::abs(x));
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double x) { return std::abs(x) > tolerance * top; }));
}

SpectralReport analyze_spectrum(const Mat& symmetric, double rank_tolerance) {
  SpectralReport report;
  report.decomposition = sym_eig(symmetric);
  report.eigenvalues = report.decomposition.values;
  report.trace = trace(symmetric);
  const std::size_t n = symmetric.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const auto vk = report.decomposition.vector(k);
    report.dirichlet.push_back(dirichlet_energy(vk, symmetric));
    report.ipr.push_back(ipr(vk, NormPolicy::normalize));
  }
  report.rank = numeric_rank(report.eigenvalues, rank_tolerance);
  return report;
}

}  // namespace intergat
