#include "polyens/complex_matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "polyens/errors.hpp"

namespace polyens {

namespace {

using EigenRowMajor =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const ComplexMatrix& m) {
  return {m.entries().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

double max_abs(const ComplexMatrix& m) {
  double v = 0.0;
  for (const Complex& z : m.entries()) v = std::max(v, std::abs(z));
  return v;
}

double one_norm(const ComplexMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw PreconditionError("matrix product dimension mismatch");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Complex det(const ComplexMatrix& m) {
  if (!m.square()) throw PreconditionError("det: matrix must be square");
  if (m.rows() == 0) return 1.0;
  Eigen::PartialPivLU<EigenRowMajor> lu(as_eigen(m));
  return lu.determinant();
}

ComplexMatrix invert(const ComplexMatrix& m) {
  if (!m.square()) throw PreconditionError("invert: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return m;
  Eigen::FullPivLU<EigenRowMajor> lu(as_eigen(m));
  if (!lu.isInvertible()) throw PreconditionError("invert: singular matrix");
  EigenRowMajor inv = lu.inverse();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  double cond = one_norm(m) * one_norm(out);
  if (!(cond < 1e12)) {
    throw PreconditionError("invert: condition estimate " +
                            std::to_string(cond) + " exceeds 1e12");
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.square()) {
    throw PreconditionError("hermitian_eigenvalues: matrix must be square");
  }
  const std::size_t n = m.rows();
  double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-12 * scale) {
        throw PreconditionError("hermitian_eigenvalues: input not Hermitian");
      }
    }
  }
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<EigenRowMajor> solver(
      as_eigen(m), Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace polyens
