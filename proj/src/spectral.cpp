#include "looptf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace looptf {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in-place (EISPACK tred2 lineage).
// On exit `a` holds the accumulated transform Q, `diag` the diagonal and
// `off` the subdiagonal (off[0] unused).
void tridiagonalize(RealMatrix& a, std::vector<double>& diag,
                    std::vector<double>& off) {
  const std::size_t n = a.rows();
  diag.assign(n, 0.0);
  off.assign(n, 0.0);

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        off[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        off[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          off[j] = g / h;
          f += off[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a(i, j);
          g = off[j] - hh * f;
          off[j] = g;
          for (std::size_t k = 0; k <= j; ++k) {
            a(j, k) -= f * off[k] + g * a(i, k);
          }
        }
      }
    } else {
      off[i] = a(i, l);
    }
    diag[i] = h;
  }
  diag[0] = 0.0;
  off[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (diag[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
        for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
      }
    }
    diag[i] = a(i, i);
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      a(j, i) = 0.0;
      a(i, j) = 0.0;
    }
  }
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix,
// rotating the eigenvector columns of `z` along.
void ql_implicit_shift(std::vector<double>& diag, std::vector<double>& off,
                       RealMatrix& z) {
  const std::size_t n = diag.size();
  constexpr int kMaxSweeps = 50;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t i = 1; i < n; ++i) off[i - 1] = off[i];
  off[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(off[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweeps) {
          throw ConvergenceError(
              "sym_eig: QL iteration did not converge, residual " +
              std::to_string(std::fabs(off[m])));
        }
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * off[i];
          const double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && m - l > 1) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
}

RealMatrix symmetrized(const RealMatrix& a) {
  if (a.empty()) throw DimensionError("sym_eig: empty matrix");
  if (a.rows() != a.cols()) {
    throw DimensionError("sym_eig: matrix is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ", not square");
  }
  double max_asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      max_asym = std::max(max_asym, std::fabs(a(i, j) - a(j, i)));
  if (max_asym > kSymmetryTol) {
    throw DimensionError("sym_eig: matrix asymmetric by " +
                         std::to_string(max_asym));
  }
  RealMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace

SymmetricEigen sym_eig(const RealMatrix& a) {
  RealMatrix work = symmetrized(a);
  const std::size_t n = work.rows();

  std::vector<double> diag;
  std::vector<double> off;
  if (n == 1) {
    diag.assign(1, work(0, 0));
    work(0, 0) = 1.0;
  } else {
    tridiagonalize(work, diag, off);
    ql_implicit_shift(diag, off, work);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&diag](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

  SymmetricEigen out;
  out.values = RealVector(n);
  out.vectors = RealMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = work(i, order[j]);
  }
  return out;
}

std::pair<double, double> sym_eig_extremes(const RealMatrix& a) {
  const SymmetricEigen eig = sym_eig(a);
  return {eig.values[0], eig.values[eig.values.dim() - 1]};
}

double spectral_norm(const RealMatrix& a) {
  if (a.empty()) throw DimensionError("spectral_norm: empty matrix");
  const auto [lo, hi] = sym_eig_extremes(gram(a));
  (void)lo;
  return std::sqrt(std::max(hi, 0.0));
}

SpectralSummary condition_number(const RealMatrix& x) {
  if (x.empty()) throw DimensionError("condition_number: empty matrix");
  if (x.rows() <= x.cols()) {
    throw UnderdeterminedError("condition_number: needs n > d, got n=" +
                               std::to_string(x.rows()) + " d=" +
                               std::to_string(x.cols()));
  }
  auto [lo, hi] = sym_eig_extremes(gram(x));
  if (hi <= 0.0 || lo < kSingularRatio * hi) {
    throw SingularityError(
        "condition_number: X^T X singular in working precision "
        "(lambda_min=" + std::to_string(lo) + ", lambda_max=" +
        std::to_string(hi) + ")");
  }
  SpectralSummary s;
  s.lambda_min = std::max(lo, 0.0);
  s.lambda_max = hi;
  s.condition_number = hi / lo;
  return s;
}

RealVector least_squares(const RealMatrix& x, const RealVector& y) {
  if (x.empty()) throw DimensionError("least_squares: empty matrix");
  if (x.rows() != y.dim()) {
    throw DimensionError("least_squares: X has " + std::to_string(x.rows()) +
                         " rows but y has dim " + std::to_string(y.dim()));
  }
  if (x.rows() <= x.cols()) {
    throw UnderdeterminedError("least_squares: needs n > d, got n=" +
                               std::to_string(x.rows()) + " d=" +
                               std::to_string(x.cols()));
  }

  const SymmetricEigen eig = sym_eig(gram(x));
  const std::size_t d = x.cols();
  const double lambda_max = eig.values[d - 1];
  const double lambda_min = eig.values[0];
  if (lambda_max <= 0.0 || lambda_min < kSingularRatio * lambda_max) {
    throw SingularityError("least_squares: X^T X singular in working precision");
  }

  // theta = V diag(1/lambda) V^T (X^T y)
  const RealVector xty = transpose_matvec(x, y);
  RealVector coeffs(d);
  for (std::size_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += eig.vectors(i, j) * xty[i];
    coeffs[j] = acc / eig.values[j];
  }
  RealVector theta(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += eig.vectors(i, j) * coeffs[j];
    theta[i] = acc;
  }
  return theta;
}

}  // namespace looptf
