#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polyens/contour.hpp"
#include "polyens/errors.hpp"
#include "polyens/quadrature.hpp"

using namespace polyens;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss rules integrate their benchmark moments") {
  QuadratureRule leg = gauss_legendre(5, -1.0, 1.0);
  Complex v = integrate(leg, [](double x) { return x * x; });
  CHECK(std::abs(v.real() - 2.0 / 3.0) < 1e-12);

  QuadratureRule herm = gauss_hermite(20);
  v = integrate(herm, [](double x) { return std::exp(-x * x); });
  CHECK(std::abs(v.real() - std::sqrt(kPi)) < 1e-12);

  QuadratureRule lag = gauss_laguerre(20, 0.0);
  v = integrate(lag, [](double x) { return x * std::exp(-x); });
  CHECK(std::abs(v.real() - 1.0) < 1e-12);
}

TEST_CASE("rules are exact for polynomials of degree 2n-1") {
  // against the classical weight, polynomial part evaluated explicitly
  std::size_t n = 7;
  QuadratureRule leg = gauss_legendre(n, 0.0, 2.0);
  // int_0^2 x^13 dx = 2^14 / 14
  Complex v = integrate(leg, [](double x) { return std::pow(x, 13); });
  CHECK(std::abs(v.real() - std::pow(2.0, 14) / 14.0) <
        1e-12 * (std::pow(2.0, 14) / 14.0));
}

TEST_CASE("rule structure invariants") {
  for (const QuadratureRule& r :
       {gauss_legendre(40, -2.0, 3.0), gauss_hermite(64), gauss_laguerre(64, 1.5)}) {
    REQUIRE(r.nodes.size() == r.weights.size());
    for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i) {
      CHECK(r.nodes[i] < r.nodes[i + 1]);
    }
    for (double w : r.weights) CHECK(w > 0.0);
  }
  CHECK_THROWS_AS(gauss_legendre(0, -1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(gauss_laguerre(4, -1.5), PreconditionError);
}

TEST_CASE("circle contour integrals") {
  ContourPath c1 = ContourPath::circle(0.0, 1.0, 64);
  Complex v = contour_integral(c1, [](Complex u) { return 1.0 / u; });
  CHECK(std::abs(v - Complex(1.0)) < 1e-13);

  v = contour_integral(c1, [](Complex u) { return u; });
  CHECK(std::abs(v) < 1e-13);

  ContourPath c2 = ContourPath::circle(0.0, 2.0, 128);
  v = contour_integral(
      c2, [](Complex u) { return 1.0 / ((u - 1.0) * (u + 1.0)); });
  CHECK(std::abs(v) < 1e-13);  // residues cancel

  CHECK_THROWS_AS(ContourPath::circle(0.0, -1.0, 64), PreconditionError);
  CHECK_THROWS_AS(ContourPath::circle(0.0, 1.0, 4), PreconditionError);
}

TEST_CASE("closed-circle integral of a polynomial vanishes") {
  // plain contour integral (no residue normalization): multiply back 2 pi i
  for (double radius : {0.5, 1.0, 2.5}) {
    ContourPath c = ContourPath::circle(0.3, radius, 256);
    Complex v = contour_integral(c, [](Complex u) {
      return 1.0 + 2.0 * u + 3.0 * u * u - u * u * u;
    });
    CHECK(std::abs(v * Complex(0.0, 2.0 * kPi)) < 1e-12);
  }
}

TEST_CASE("doubling a converged integral moves it by less than 1e-10") {
  auto eval = [](std::size_t n) {
    QuadratureRule r = gauss_hermite(n);
    return integrate(r, [](double x) {
      return std::exp(-x * x) * std::cos(x);
    });
  };
  Gated<Complex> g = converge(eval, 64);
  CHECK(g.gap < 1e-10);
  // exact: sqrt(pi) e^{-1/4}
  CHECK(std::abs(g.value.real() - std::sqrt(kPi) * std::exp(-0.25)) < 1e-12);
}

TEST_CASE("non-convergence raises instead of returning") {
  // A step discontinuity keeps the Gauss-Legendre error O(1/n); the gate
  // must refuse it.
  auto eval = [](std::size_t n) {
    QuadratureRule r = gauss_legendre(n, -1.0, 1.0);
    return integrate(r, [](double x) { return x > 0.123 ? 1.0 : 0.0; });
  };
  CHECK_THROWS_AS(converge(eval, 16), NonConvergenceError);
}

TEST_CASE("line contours") {
  // imaginary axis: i * int f(it) dt with Gaussian decay
  ContourPath axis = ContourPath::imaginary_axis(1e30, 64);
  Complex v = contour_integral(axis, [](Complex s) {
    // f(s) = e^{s^2} has e^{-t^2} decay on the axis
    return std::exp(s * s);
  });
  CHECK(std::abs(v - Complex(0.0, std::sqrt(kPi))) < 1e-12);

  ContourPath half = ContourPath::negative_half_line(64);
  v = contour_integral(half, [](Complex s) { return std::exp(s); });
  CHECK(std::abs(v - Complex(1.0)) < 1e-12);
}
