#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "looptf/errors.hpp"

namespace looptf {

/// Dense real vector. Entries are validated finite on construction.
class RealVector {
 public:
  RealVector() = default;
  explicit RealVector(std::size_t dim) : entries_(dim, 0.0) {}
  RealVector(std::initializer_list<double> entries);
  explicit RealVector(std::vector<double> entries);

  std::size_t dim() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }

  bool operator==(const RealVector& other) const = default;

 private:
  std::vector<double> entries_;
};

/// Dense row-major real matrix. Sized constructors require positive
/// dimensions; a default-constructed matrix is empty (0x0).
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const std::vector<double>& entries() const { return entries_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  bool operator==(const RealMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Vector arithmetic.
double dot(const RealVector& a, const RealVector& b);
double l2_norm(const RealVector& v);
double linf_norm(const RealVector& v);
RealVector operator+(const RealVector& a, const RealVector& b);
RealVector operator-(const RealVector& a, const RealVector& b);
RealVector operator*(double s, const RealVector& v);

// Matrix arithmetic.
RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
/// A^T A, exactly symmetric by construction (each off-diagonal pair is
/// filled from a single accumulated sum).
RealMatrix gram(const RealMatrix& a);
RealVector matvec(const RealMatrix& a, const RealVector& v);
/// A^T v without forming the transpose.
RealVector transpose_matvec(const RealMatrix& a, const RealVector& v);
RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);

}  // namespace looptf
