#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intergat/mat.hpp"

namespace intergat {

/// Eigenvalues in ascending order with unit-norm eigenvectors as the columns of
/// `vectors`. Each eigenvector's largest-magnitude component is positive.
struct EigenDecomp {
  std::vector<double> values;
  Mat vectors;

  std::vector<double> vector(std::size_t k) const;
};

struct EigOptions {
  /// Stop when the off-diagonal Frobenius norm falls below tol * ‖M‖_F.
  double tolerance = 1e-15;
  std::size_t max_sweeps = 100;
  /// Largest tolerated |M_ij - M_ji| relative to max|M| before the input is rejected.
  double symmetry_tolerance = 1e-9;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Throws UsageError for
/// asymmetric input and NumericError when the sweep budget runs out.
EigenDecomp sym_eig(const Mat& m, const EigOptions& options = {});

/// vᵀ(D - I)v with D_ii = Σ_j I_ij. May be negative for signed I.
double dirichlet_energy(std::span<const double> v, const Mat& interaction);

enum class NormPolicy { reject, normalize };
/// Σ v_i⁴ for a unit vector. Non-unit input (beyond 1e-9) is rejected with UsageError or
/// renormalized, per `policy`.
double ipr(std::span<const double> v, NormPolicy policy = NormPolicy::reject);

/// Fraction of entries with |m_ij| < threshold.
double sparsity_fraction(const Mat& m, double threshold = 1e-4);

/// Count of eigenvalues with |λ| > tol * max|λ|; 0 for an all-zero spectrum.
std::size_t numeric_rank(std::span<const double> eigenvalues, double tolerance = 1e-8);

struct SpectralReport {
  std::vector<double> eigenvalues;
  std::vector<double> dirichlet;
  std::vector<double> ipr;
  std::size_t rank = 0;
  double trace = 0.0;
  EigenDecomp decomposition;
};

/// Full spectral summary of a symmetric matrix.
SpectralReport analyze_spectrum(const Mat& symmetric, double rank_tolerance = 1e-8);

}  // namespace intergat
