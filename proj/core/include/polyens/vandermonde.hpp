#pragma once

#include <span>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/errors.hpp"

namespace polyens {

/// Sorted distinct 1-based positions l_1 < ... < l_L within 1..N.
class IndexSet {
 public:
  IndexSet(std::vector<std::size_t> positions, std::size_t n);

  const std::vector<std::size_t>& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  std::size_t universe() const { return n_; }
  bool contains(std::size_t onebased) const;

 private:
  std::vector<std::size_t> positions_;
  std::size_t n_;
};

/// prod_{i<j} (x_i - x_j); empty and singleton lists give 1. Coincident
/// entries are fine here (result 0) -- they are rejected only where a
/// Vandermonde factor lands in a denominator.
Complex vandermonde(std::span<const Complex> xs);
Complex vandermonde(std::span<const double> xs);

struct ExtendedVandermondeCheck {
  Complex lhs;  // prod_{m,n}(x_n - z_m) * Delta_N(x)
  Complex rhs;  // Delta_{N+M}(x, z) / Delta_M(z)
  double gap;
};
ExtendedVandermondeCheck extended_vandermonde_check(std::span<const Complex> xs,
                                                    std::span<const Complex> zs);

struct ReducedVandermonde {
  Complex direct;       // product over surviving indices
  Complex closed_form;  // sign * Delta_N * Delta_L / denominators
};
ReducedVandermonde reduced_vandermonde(std::span<const Complex> xs,
                                       const IndexSet& removed);

/// Delta_{N+M}(xs, zs) == (-1)^{NM} Delta_{N+M}(zs, xs), to 1e-12 relative.
bool vandermonde_swap_sign_check(std::span<const Complex> xs,
                                 std::span<const Complex> zs);

struct LagrangeExtrapolationCheck {
  Complex lhs;  // 1 / prod_j (u - s_j)
  Complex rhs;  // partial-fraction sum
};
LagrangeExtrapolationCheck lagrange_extrapolation_check(
    Complex u, std::span<const Complex> ss);

/// Shared "pairwise distinct" guard: relative separation >= 1e-8.
void require_pairwise_distinct(std::span<const Complex> xs, const char* what);
void require_pairwise_distinct(std::span<const double> xs, const char* what);

}  // namespace polyens
