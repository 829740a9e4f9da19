#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polyens/ensemble.hpp"
#include "polyens/errors.hpp"
#include "polyens/quadrature.hpp"
#include "polyens/special_functions.hpp"

using namespace polyens;

namespace {

// Series oracle for the generalized Laguerre value k! L_k^nu(-z):
// L_k^nu(x) = sum_j (-1)^j binom(k+nu, k-j) x^j / j!
double laguerre_series_oracle(unsigned k, double nu, double z) {
  double total = 0.0;
  for (unsigned j = 0; j <= k; ++j) {
    // binom(k+nu, k-j) = Gamma(k+nu+1) / (Gamma(nu+j+1) (k-j)!)
    double b = std::exp(log_gamma(k + nu + 1.0) - log_gamma(nu + j + 1.0) -
                        log_gamma(static_cast<double>(k - j) + 1.0));
    total += b * std::pow(z, j) / std::tgamma(j + 1.0);
  }
  return std::tgamma(k + 1.0) * total;
}

// Direct modified-Bessel series: I_nu(x) = sum (x/2)^{nu+2k} / (k! Gamma(nu+k+1))
double bessel_i_series(double nu, double x) {
  double total = 0.0;
  for (unsigned k = 0; k < 200; ++k) {
    double t = std::exp((nu + 2.0 * k) * std::log(x / 2.0) -
                        log_gamma(k + 1.0) - log_gamma(nu + k + 1.0));
    total += t;
    if (t < 1e-18 * total) break;
  }
  return total;
}

// Direct Bessel-J series at positive argument.
double bessel_j_series(double nu, double x) {
  double total = 0.0;
  for (unsigned k = 0; k < 200; ++k) {
    double t = std::exp((nu + 2.0 * k) * std::log(x / 2.0) -
                        log_gamma(k + 1.0) - log_gamma(nu + k + 1.0));
    total += (k % 2 == 0 ? t : -t);
    if (t < 1e-18 * std::abs(total) && k > 4) break;
  }
  return total;
}

}  // namespace

TEST_CASE("log_gamma") {
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-15);
  CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(std::numbers::pi))) <
        1e-14);
  CHECK_THROWS_AS(log_gamma(0.0), PreconditionError);
  CHECK_THROWS_AS(log_gamma(-2.5), PreconditionError);
}

TEST_CASE("hermite_monic small cases") {
  CHECK(hermite_monic(0, Complex(3.7, -1.0)) == Complex(1.0));
  Complex a(0.8, 0.3);
  CHECK(std::abs(hermite_monic(1, a) - a) < 1e-15);
  CHECK(std::abs(hermite_monic(2, a) - (a * a - 0.5)) < 1e-15);
}

TEST_CASE("laguerre_monic small cases and series oracle") {
  Nu nu0(0.0), nu1(1.3);
  CHECK(laguerre_monic(0, nu1, Complex(2.0)) == Complex(1.0));
  Complex z(1.1, -0.4);
  CHECK(std::abs(laguerre_monic(1, nu1, z) - (z + nu1.value + 1.0)) < 1e-14);
  // k=3, nu=0, z=2: term-by-term series of 3! L_3(-2)
  double expect = laguerre_series_oracle(3, 0.0, 2.0);
  CHECK(std::abs(laguerre_monic(3, nu0, Complex(2.0)).real() - expect) <
        1e-12 * std::abs(expect));
}

TEST_CASE("bessel_i_reg against independent series") {
  CHECK(std::abs(bessel_i_reg(Nu(0.0), Complex(0.0)) - Complex(1.0)) < 1e-16);
  // g_0(1) must equal I_0(2) through the direct Bessel series
  double i02 = bessel_i_series(0.0, 2.0);
  CHECK(std::abs(bessel_i_reg(Nu(0.0), Complex(1.0)).real() - i02) < 1e-12);
  // g_nu(-x) = x^{-nu/2} J_nu(2 sqrt x) at nu=1, x=1
  double j12 = bessel_j_series(1.0, 2.0);
  CHECK(std::abs(bessel_i_reg(Nu(1.0), Complex(-1.0)).real() - j12) < 1e-12);
}

TEST_CASE("bessel recurrence through g_nu") {
  // I_{nu-1}(x) - I_{nu+1}(x) = (2 nu / x) I_nu(x), with
  // I_nu(x) = (x/2)^nu g_nu(x^2/4)
  for (double x : {0.5, 2.0, 5.0}) {
    double w = x * x / 4.0;
    for (int nu = 1; nu <= 4; ++nu) {
      auto bi = [&](double order) {
        return std::pow(x / 2.0, order) *
               bessel_i_reg(Nu(order), Complex(w)).real();
      };
      double lhs = bi(nu - 1.0) - bi(nu + 1.0);
      double rhs = 2.0 * nu / x * bi(nu);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("monic Hermite quadrature identity") {
  // int x^k e^{-(x-a)^2}/sqrt(pi) dx equals i^{-k} 2^{-k} H_k(i a)
  QuadratureRule r = gauss_hermite(64);
  for (unsigned k = 0; k <= 10; ++k) {
    for (double a : {0.0, 0.7, -0.7, -1.3}) {
      Complex q = integrate(r, [&](double x) {
        double d = x - a;
        return ipow(Complex(x), k) * std::exp(-d * d) /
               std::sqrt(std::numbers::pi);
      });
      Complex expect =
          ipow(Complex(0.0, -1.0), k) * hermite_monic(k, Complex(0.0, a));
      CHECK(std::abs(q - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("monic Laguerre quadrature identity (branch-free Bessel form)") {
  // int_0^infty x^{k+nu} e^{-(x+a)} g_nu(a x) dx equals k! L_k^nu(-a)
  for (double nu : {0.0, 1.0, 2.5}) {
    QuadratureRule r = gauss_laguerre(200, nu);
    for (unsigned k = 0; k <= 8; ++k) {
      for (double a : {0.3, 1.7}) {
        Complex q = integrate(r, [&](double x) {
          return std::pow(x, k + nu) * std::exp(-(x + a)) *
                 bessel_i_reg(Nu(nu), Complex(a * x));
        });
        double expect = laguerre_monic(k, Nu(nu), Complex(a)).real();
        CHECK(std::abs(q.real() - expect) <
              1e-8 * std::max(1.0, std::abs(expect)));
        CHECK(std::abs(q.imag()) < 1e-12);
      }
    }
  }
}

TEST_CASE("Nu validation") {
  CHECK_THROWS_AS(Nu(-1.0), PreconditionError);
  CHECK_NOTHROW(Nu(-0.5));
}
