#include <doctest.h>

#include <cmath>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/errors.hpp"
#include "polyens/oracle.hpp"
#include "polyens/vandermonde.hpp"

using namespace polyens;

namespace {

std::vector<Complex> random_points(std::size_t n, std::uint64_t seed) {
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double g0, g1;
    rng::normal_pair(seed, 0, i, g0, g1);
    out[i] = Complex(g0, 0.5 * g1);
  }
  return out;
}

}  // namespace

TEST_CASE("vandermonde values") {
  CHECK(vandermonde(std::span<const Complex>{}) == Complex(1.0));
  std::vector<Complex> one{Complex(4.2, 1.0)};
  CHECK(vandermonde(std::span<const Complex>(one)) == Complex(1.0));
  std::vector<Complex> three{3.0, 2.0, 1.0};
  CHECK(std::abs(vandermonde(std::span<const Complex>(three)) - Complex(2.0)) <
        1e-15);
  std::vector<Complex> coincident{1.0, 1.0};
  CHECK(vandermonde(std::span<const Complex>(coincident)) == Complex(0.0));
}

TEST_CASE("vandermonde equals the monomial determinant") {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<Complex> xs = random_points(n, 100 + n);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex p = 1.0;
        for (std::size_t e = 0; e < n - 1 - i; ++e) p *= xs[j];
        m(i, j) = p;  // rows x_j^{N-i}
      }
    }
    Complex lhs = vandermonde(std::span<const Complex>(xs));
    Complex rhs = det(m);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("vandermonde is alternating") {
  for (std::size_t n = 2; n <= 5; ++n) {
    std::vector<Complex> xs = random_points(n, 300 + n);
    Complex base = vandermonde(std::span<const Complex>(xs));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::vector<Complex> sw = xs;
      std::swap(sw[i], sw[i + 1]);
      CHECK(std::abs(vandermonde(std::span<const Complex>(sw)) + base) <
            1e-12 * std::abs(base));
    }
  }
}

TEST_CASE("extension formula") {
  std::vector<Complex> xs{1.0, 2.0};
  std::vector<Complex> zs{0.0};
  auto chk = extended_vandermonde_check(xs, zs);
  CHECK(std::abs(chk.lhs - Complex(-2.0)) < 1e-14);
  CHECK(chk.gap < 1e-14);

  auto empty_z = extended_vandermonde_check(xs, std::span<const Complex>{});
  CHECK(std::abs(empty_z.lhs - empty_z.rhs) < 1e-15);
  CHECK(std::abs(empty_z.lhs - Complex(-1.0)) < 1e-15);  // Delta(1,2)

  auto empty_x = extended_vandermonde_check(std::span<const Complex>{}, zs);
  CHECK(std::abs(empty_x.lhs - Complex(1.0)) < 1e-15);
  CHECK(std::abs(empty_x.rhs - Complex(1.0)) < 1e-15);

  std::vector<Complex> zdup{1.0, 1.0};
  CHECK_THROWS_AS(extended_vandermonde_check(xs, zdup), PreconditionError);
}

TEST_CASE("extension formula over random sets") {
  for (std::size_t n = 0; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      std::vector<Complex> pts = random_points(n + m, 17 * n + m);
      std::vector<Complex> xs(pts.begin(), pts.begin() + n);
      std::vector<Complex> zs(pts.begin() + n, pts.end());
      auto chk = extended_vandermonde_check(xs, zs);
      CHECK(chk.gap < 1e-12 * std::max(1.0, std::abs(chk.rhs)));
    }
  }
}

TEST_CASE("reduced vandermonde") {
  std::vector<Complex> xs{3.0, 2.0, 1.0};
  auto full = reduced_vandermonde(xs, IndexSet({1, 2, 3}, 3));
  CHECK(full.direct == Complex(1.0));
  CHECK(std::abs(full.closed_form - Complex(1.0)) < 1e-12);

  auto mid = reduced_vandermonde(xs, IndexSet({2}, 3));
  CHECK(std::abs(mid.direct - Complex(2.0)) < 1e-15);
  CHECK(std::abs(mid.closed_form - Complex(2.0)) < 1e-12);

  std::vector<Complex> xs4{4.0, 3.0, 2.0, 1.0};
  auto two = reduced_vandermonde(xs4, IndexSet({1, 3}, 4));
  CHECK(std::abs(two.direct - Complex(2.0)) < 1e-15);
  CHECK(std::abs(two.closed_form - two.direct) < 1e-12);
}

TEST_CASE("reduced vandermonde exhaustive over subsets") {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<Complex> xs = random_points(n, 777 + n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::size_t> pos;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) pos.push_back(i + 1);
      }
      auto rv = reduced_vandermonde(xs, IndexSet(pos, n));
      double scale = std::max(1.0, std::abs(rv.direct));
      CHECK(std::abs(rv.direct - rv.closed_form) < 1e-12 * scale);
    }
  }
}

TEST_CASE("swap sign") {
  std::vector<Complex> x1{1.0};
  std::vector<Complex> z1{2.0};
  CHECK(vandermonde_swap_sign_check(x1, z1));
  std::vector<Complex> x2{1.0, 2.0};
  std::vector<Complex> z2{3.0};
  CHECK(vandermonde_swap_sign_check(x2, z2));
  std::vector<Complex> xs = random_points(3, 5);
  std::vector<Complex> zs = random_points(2, 6);
  CHECK(vandermonde_swap_sign_check(xs, zs));
}

TEST_CASE("lagrange extrapolation") {
  std::vector<Complex> s0{0.0};
  auto c = lagrange_extrapolation_check(Complex(2.5, 1.0), s0);
  CHECK(std::abs(c.lhs - c.rhs) < 1e-15);
  CHECK(std::abs(c.lhs - 1.0 / Complex(2.5, 1.0)) < 1e-15);

  std::vector<Complex> s2{1.0, -1.0};
  c = lagrange_extrapolation_check(Complex(2.0), s2);
  CHECK(std::abs(c.lhs - Complex(1.0 / 3.0)) < 1e-15);
  CHECK(std::abs(c.lhs - c.rhs) < 1e-14);

  std::vector<Complex> s4 = random_points(4, 99);
  c = lagrange_extrapolation_check(Complex(0.37, 2.0), s4);
  CHECK(std::abs(c.lhs - c.rhs) < 1e-12 * std::max(1.0, std::abs(c.lhs)));

  CHECK_THROWS_AS(lagrange_extrapolation_check(Complex(1.0), s2),
                  PreconditionError);
}

TEST_CASE("index set validation") {
  CHECK_THROWS_AS(IndexSet({2, 2}, 3), PreconditionError);
  CHECK_THROWS_AS(IndexSet({0}, 3), PreconditionError);
  CHECK_THROWS_AS(IndexSet({4}, 3), PreconditionError);
  CHECK_NOTHROW(IndexSet({}, 3));
}
