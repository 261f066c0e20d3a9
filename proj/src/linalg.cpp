#include "looptf/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

namespace looptf {

namespace {

void require_finite(const std::vector<double>& entries, const char* what) {
  for (double v : entries) {
    if (!std::isfinite(v)) {
      throw DimensionError(std::string(what) + ": non-finite entry");
    }
  }
}

void require_same_dim(const RealVector& a, const RealVector& b,
                      const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": vector dimensions " +
                         std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()) + " differ");
  }
}

}  // namespace

RealVector::RealVector(std::initializer_list<double> entries)
    : entries_(entries) {
  require_finite(entries_, "RealVector");
}

RealVector::RealVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  require_finite(entries_, "RealVector");
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("RealMatrix: dimensions must be positive");
  }
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("RealMatrix: dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw DimensionError("RealMatrix: entry count " +
                         std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  require_finite(entries_, "RealMatrix");
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double dot(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(const RealVector& v) { return std::sqrt(dot(v, v)); }

double linf_norm(const RealVector& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) m = std::max(m, std::fabs(v[i]));
  return m;
}

RealVector operator+(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "operator+");
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

RealVector operator-(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "operator-");
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

RealVector operator*(double s, const RealVector& v) {
  RealVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = s * v[i];
  return out;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions " +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  if (a.empty()) throw DimensionError("transpose: empty matrix");
  RealMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

RealMatrix gram(const RealMatrix& a) {
  if (a.empty()) throw DimensionError("gram: empty matrix");
  RealMatrix out(a.cols(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t k = j; k < a.cols(); ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, j) * a(i, k);
      out(j, k) = acc;
      out(k, j) = acc;
    }
  }
  return out;
}

RealVector matvec(const RealMatrix& a, const RealVector& v) {
  if (a.cols() != v.dim()) {
    throw DimensionError("matvec: matrix cols " + std::to_string(a.cols()) +
                         " vs vector dim " + std::to_string(v.dim()));
  }
  RealVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

RealVector transpose_matvec(const RealMatrix& a, const RealVector& v) {
  if (a.rows() != v.dim()) {
    throw DimensionError("transpose_matvec: matrix rows " +
                         std::to_string(a.rows()) + " vs vector dim " +
                         std::to_string(v.dim()));
  }
  RealVector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * vi;
  }
  return out;
}

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hadamard: shapes differ");
  }
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * b(i, j);
  return out;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("operator-: shapes differ");
  }
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  if (a.empty()) throw DimensionError("operator*: empty matrix");
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

}  // namespace looptf
