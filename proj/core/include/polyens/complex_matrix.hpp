#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace polyens {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Small sizes only (the determinant
/// formulas in this toolkit stay below ~20x20), so no view machinery.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& entries() { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Determinant via row-pivoted LU. The empty 0x0 matrix has determinant 1.
Complex det(const ComplexMatrix& m);

/// Inverse of a square, well-conditioned matrix (1-norm condition estimate
/// below 1e12). Throws PreconditionError otherwise.
ComplexMatrix invert(const ComplexMatrix& m);

/// Ascending eigenvalues of a Hermitian matrix (Hermiticity checked to
/// 1e-12 relative). Throws PreconditionError for non-Hermitian input.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace polyens
