#include "polyens/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyens/quadrature.hpp"

namespace polyens {

namespace {

double pair_scale(const Complex& a, const Complex& b) {
  return std::max({1.0, std::abs(a), std::abs(b)});
}

template <class T>
Complex vandermonde_impl(std::span<const T> xs) {
  Complex p = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      p *= Complex(xs[i]) - Complex(xs[j]);
    }
  }
  return p;
}

}  // namespace

IndexSet::IndexSet(std::vector<std::size_t> positions, std::size_t n)
    : positions_(std::move(positions)), n_(n) {
  if (!std::is_sorted(positions_.begin(), positions_.end(),
                      std::less_equal<>())) {
    throw PreconditionError("IndexSet: positions must be strictly increasing");
  }
  if (!positions_.empty() &&
      (positions_.front() < 1 || positions_.back() > n_)) {
    throw PreconditionError("IndexSet: positions must lie in 1..N");
  }
}

bool IndexSet::contains(std::size_t onebased) const {
  return std::binary_search(positions_.begin(), positions_.end(), onebased);
}

Complex vandermonde(std::span<const Complex> xs) {
  return vandermonde_impl(xs);
}
Complex vandermonde(std::span<const double> xs) {
  return vandermonde_impl(xs);
}

void require_pairwise_distinct(std::span<const Complex> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (std::abs(xs[i] - xs[j]) < 1e-8 * pair_scale(xs[i], xs[j])) {
        throw PreconditionError(std::string(what) +
                                ": entries must be pairwise distinct");
      }
    }
  }
}

void require_pairwise_distinct(std::span<const double> xs, const char* what) {
  std::vector<Complex> c(xs.begin(), xs.end());
  require_pairwise_distinct(std::span<const Complex>(c), what);
}

ExtendedVandermondeCheck extended_vandermonde_check(
    std::span<const Complex> xs, std::span<const Complex> zs) {
  require_pairwise_distinct(zs, "extended_vandermonde_check(zs)");
  Complex lhs = vandermonde(xs);
  for (const Complex& z : zs) {
    for (const Complex& x : xs) lhs *= (x - z);
  }
  std::vector<Complex> joined(xs.begin(), xs.end());
  joined.insert(joined.end(), zs.begin(), zs.end());
  Complex rhs = vandermonde(std::span<const Complex>(joined)) /
                vandermonde(zs);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

ReducedVandermonde reduced_vandermonde(std::span<const Complex> xs,
                                       const IndexSet& removed) {
  require_pairwise_distinct(xs, "reduced_vandermonde(xs)");
  if (removed.universe() != xs.size()) {
    throw PreconditionError("reduced_vandermonde: index set universe mismatch");
  }
  std::vector<Complex> survivors;
  std::vector<Complex> taken;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (removed.contains(i + 1)) {
      taken.push_back(xs[i]);
    } else {
      survivors.push_back(xs[i]);
    }
  }
  ReducedVandermonde out;
  out.direct = vandermonde(std::span<const Complex>(survivors));

  const std::size_t n = xs.size();
  Complex sign = 1.0;
  Complex denom = 1.0;
  for (std::size_t lj : removed.positions()) {
    if ((n - lj) % 2 == 1) sign = -sign;
    for (std::size_t m = 0; m < n; ++m) {
      if (m + 1 != lj) denom *= (xs[m] - xs[lj - 1]);
    }
  }
  out.closed_form = sign * vandermonde(xs) *
                    vandermonde(std::span<const Complex>(taken)) / denom;
  return out;
}

bool vandermonde_swap_sign_check(std::span<const Complex> xs,
                                 std::span<const Complex> zs) {
  std::vector<Complex> xz(xs.begin(), xs.end());
  xz.insert(xz.end(), zs.begin(), zs.end());
  std::vector<Complex> zx(zs.begin(), zs.end());
  zx.insert(zx.end(), xs.begin(), xs.end());
  require_pairwise_distinct(std::span<const Complex>(xz),
                            "vandermonde_swap_sign_check");
  Complex a = vandermonde(std::span<const Complex>(xz));
  Complex b = vandermonde(std::span<const Complex>(zx));
  if ((xs.size() * zs.size()) % 2 == 1) b = -b;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

LagrangeExtrapolationCheck lagrange_extrapolation_check(
    Complex u, std::span<const Complex> ss) {
  require_pairwise_distinct(ss, "lagrange_extrapolation_check(ss)");
  for (const Complex& s : ss) {
    if (std::abs(u - s) < 1e-8 * pair_scale(u, s)) {
      throw PreconditionError(
          "lagrange_extrapolation_check: u coincides with a node");
    }
  }
  Complex lhs = 1.0;
  for (const Complex& s : ss) lhs /= (u - s);
  CompensatedSumComplex rhs;
  for (std::size_t m = 0; m < ss.size(); ++m) {
    Complex term = 1.0 / (u - ss[m]);
    for (std::size_t j = 0; j < ss.size(); ++j) {
      if (j != m) term /= (ss[m] - ss[j]);
    }
    rhs.add(term);
  }
  return {lhs, rhs.value()};
}

}  // namespace polyens
