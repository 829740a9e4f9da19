#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/errors.hpp"
#include "polyens/oracle.hpp"

using namespace polyens;

namespace {

ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows) {
  ComplexMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed,
                            bool hermitian) {
  ComplexMatrix m(n, n);
  std::uint64_t entry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double g0, g1;
      rng::normal_pair(seed, 0, entry++, g0, g1);
      m(i, j) = Complex(g0, g1);
    }
  }
  if (hermitian) {
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = m(i, i).real();
      for (std::size_t j = i + 1; j < n; ++j) m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("det basics") {
  CHECK(det(ComplexMatrix::identity(3)) == Complex(1.0));
  CHECK(det(ComplexMatrix(0, 0)) == Complex(1.0));
  ComplexMatrix swap = from_rows({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(std::abs(det(swap) - Complex(-1.0)) < 1e-15);
  CHECK_THROWS_AS(det(ComplexMatrix(2, 3)), PreconditionError);
}

TEST_CASE("det of a Cauchy matrix matches the closed form") {
  std::vector<Complex> u{{0.0, 2.0}, {0.0, 3.0}};
  std::vector<Complex> z{0.0, 1.0};
  ComplexMatrix m(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = 1.0 / (u[i] - z[j]);
  }
  // (-1)^{M(M-1)/2} Delta(u) Delta(z) / prod (u_i - z_j), both computed here
  Complex closed = -(u[0] - u[1]) * (z[0] - z[1]);
  for (const Complex& ui : u) {
    for (const Complex& zj : z) closed /= (ui - zj);
  }
  CHECK(std::abs(det(m) - closed) < 1e-14 * std::abs(closed));
}

TEST_CASE("det is alternating under row permutations") {
  ComplexMatrix base = random_matrix(3, 11, false);
  Complex d = det(base);
  int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int signs[6] = {1, -1, -1, 1, 1, -1};
  for (int p = 0; p < 6; ++p) {
    ComplexMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = base(perm[p][i], j);
    }
    CHECK(std::abs(det(m) - static_cast<double>(signs[p]) * d) <
          1e-12 * std::abs(d));
  }
}

TEST_CASE("invert basics") {
  ComplexMatrix id = ComplexMatrix::identity(3);
  ComplexMatrix inv = invert(id);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(inv(i, j) - id(i, j)) < 1e-15);
    }
  }
  ComplexMatrix d = from_rows({{2.0, 0.0}, {0.0, 4.0}});
  ComplexMatrix dinv = invert(d);
  CHECK(std::abs(dinv(0, 0) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(dinv(1, 1) - Complex(0.25)) < 1e-15);

  ComplexMatrix m = random_matrix(4, 7, false);
  ComplexMatrix prod = m * invert(m);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      Complex expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(prod(i, j) - expect) < 1e-10);
    }
  }

  ComplexMatrix sing = from_rows({{1.0, 2.0}, {2.0, 4.0}});
  CHECK_THROWS_AS(invert(sing), PreconditionError);
}

TEST_CASE("hermitian eigenvalues") {
  ComplexMatrix d = from_rows({{3.0, 0, 0}, {0, 1.0, 0}, {0, 0, 2.0}});
  std::vector<double> ev = hermitian_eigenvalues(d);
  CHECK(ev == std::vector<double>{1.0, 2.0, 3.0});

  ComplexMatrix swap = from_rows({{0.0, 1.0}, {1.0, 0.0}});
  ev = hermitian_eigenvalues(swap);
  CHECK(std::abs(ev[0] + 1.0) < 1e-14);
  CHECK(std::abs(ev[1] - 1.0) < 1e-14);

  ComplexMatrix m = random_matrix(5, 23, true);
  ev = hermitian_eigenvalues(m);
  REQUIRE(ev.size() == 5);
  CHECK(std::is_sorted(ev.begin(), ev.end()));

  double tr = 0.0, tr2 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    tr += m(i, i).real();
    for (std::size_t j = 0; j < 5; ++j) tr2 += (m(i, j) * m(j, i)).real();
  }
  double se = 0.0, se2 = 0.0;
  for (double v : ev) {
    se += v;
    se2 += v * v;
  }
  CHECK(std::abs(se - tr) < 1e-9 * std::max(1.0, std::abs(tr)));
  CHECK(std::abs(se2 - tr2) < 1e-9 * std::max(1.0, std::abs(tr2)));

  // char-poly cross-check: prod (z - ev_i) = det(z I - m) at z = 1 + i
  Complex z(1.0, 1.0);
  Complex lhs = 1.0;
  for (double v : ev) lhs *= (z - v);
  ComplexMatrix zi = ComplexMatrix::identity(5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) zi(i, j) = (i == j ? z : 0.0) - m(i, j);
  }
  Complex rhs = det(zi);
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));

  ComplexMatrix nh = from_rows({{0.0, 1.0}, {2.0, 0.0}});
  CHECK_THROWS_AS(hermitian_eigenvalues(nh), PreconditionError);
}
