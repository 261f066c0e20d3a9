#pragma once

#include "looptf/linalg.hpp"

namespace looptf {

/// Extreme eigenvalues of a Gram matrix and their ratio.
struct SpectralSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition_number = 1.0;
};

/// Full eigendecomposition of a symmetric matrix: values ascending,
/// vectors stored as the columns of an orthogonal matrix.
struct SymmetricEigen {
  RealVector values;
  RealMatrix vectors;
};

/// Full spectrum of a symmetric matrix via Householder tridiagonalization
/// followed by implicit-shift QL iteration. The input is checked symmetric
/// within 1e-10 (absolute) and symmetrized before factorization.
SymmetricEigen sym_eig(const RealMatrix& a);

/// Smallest and largest eigenvalue of a symmetric matrix.
std::pair<double, double> sym_eig_extremes(const RealMatrix& a);

/// Spectral norm computed literally as sqrt(lambda_max(A^T A)).
double spectral_norm(const RealMatrix& a);

/// Extreme eigenvalues and condition number of X^T X for a tall data
/// matrix X (n rows > d cols). Declares the Gram matrix singular when
/// lambda_min < 1e-12 * lambda_max.
SpectralSummary condition_number(const RealMatrix& x);

/// Least squares through the normal equations, inverting X^T X with its
/// eigendecomposition.
RealVector least_squares(const RealMatrix& x, const RealVector& y);

/// Threshold below which lambda_min / lambda_max means "singular".
inline constexpr double kSingularRatio = 1e-12;

/// Absolute tolerance for the symmetry precondition of sym_eig.
inline constexpr double kSymmetryTol = 1e-10;

}  // namespace looptf
