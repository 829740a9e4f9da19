#include "polyens/special_functions.hpp"

#include <array>
#include <cmath>
#include <string>

#include "polyens/quadrature.hpp"

namespace polyens {

Nu::Nu(double v) : value(v) {
  if (!(v > -1.0)) {
    throw PreconditionError("Nu: order must exceed -1, got " +
                            std::to_string(v));
  }
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw PreconditionError("log_gamma: need x > 0, got " + std::to_string(x));
  }
  // Exact factorials through 20! keep small-integer normalizations crisp.
  static const std::array<double, 21> factorial = {
      1.0,
      1.0,
      2.0,
      6.0,
      24.0,
      120.0,
      720.0,
      5040.0,
      40320.0,
      362880.0,
      3628800.0,
      39916800.0,
      479001600.0,
      6227020800.0,
      87178291200.0,
      1307674368000.0,
      20922789888000.0,
      355687428096000.0,
      6402373705728000.0,
      121645100408832000.0,
      2432902008176640000.0};
  double rounded = std::round(x);
  if (std::abs(x - rounded) < 1e-14 && rounded >= 1.0 && rounded <= 21.0) {
    return std::log(factorial[static_cast<std::size_t>(rounded) - 1]);
  }
  return std::lgamma(x);
}

Complex hermite_monic(unsigned k, Complex z) {
  Complex pm = 0.0, p = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    Complex next = z * p - (static_cast<double>(i) / 2.0) * pm;
    pm = p;
    p = next;
  }
  return p;
}

Complex laguerre_monic(unsigned k, Nu nu, Complex z) {
  Complex pm = 0.0, p = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    double di = i;
    Complex next =
        (z + (2.0 * di + nu.value + 1.0)) * p - di * (di + nu.value) * pm;
    pm = p;
    p = next;
  }
  return p;
}

Complex bessel_i_reg(Nu nu, Complex w) {
  Complex term = std::exp(-log_gamma(nu.value + 1.0));
  CompensatedSumComplex acc;
  for (unsigned k = 0; k < 500; ++k) {
    acc.add(term);
    term *= w / ((k + 1.0) * (k + 1.0 + nu.value));
    // Stop only in the decaying regime; partial sums can pass near zero
    // while terms are still growing.
    bool decaying = std::abs(w) < (k + 2.0) * (k + 2.0 + nu.value);
    if (decaying &&
        std::abs(term) <= 1e-16 * std::max(std::abs(acc.value()), 1e-300)) {
      return acc.value();
    }
  }
  throw NonConvergenceError("bessel_i_reg: series needs more than 500 terms");
}

}  // namespace polyens
