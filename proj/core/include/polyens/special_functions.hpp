#pragma once

#include "polyens/complex_matrix.hpp"
#include "polyens/errors.hpp"

namespace polyens {

/// Bessel/Laguerre order parameter; anything above -1 is admissible.
struct Nu {
  double value = 0.0;
  Nu() = default;
  explicit Nu(double v);
};

/// log Gamma(x) for x > 0; exact factorial table for integer x <= 21.
double log_gamma(double x);

/// Monic Hermite polynomial 2^{-k} H_k(z) via the three-term recurrence
/// p_{k+1} = z p_k - (k/2) p_{k-1}.
Complex hermite_monic(unsigned k, Complex z);

/// Monic Laguerre-type polynomial k! L_k^nu(-z), degree k, via
/// m_{k+1} = (z + 2k + nu + 1) m_k - k (k + nu) m_{k-1}.
Complex laguerre_monic(unsigned k, Nu nu, Complex z);

/// The entire function g_nu(w) = sum_{k>=0} w^k / (k! Gamma(k+nu+1)), so
/// that I_nu(2 sqrt(w)) = w^{nu/2} g_nu(w). This branch-free form is the
/// toolkit's canonical Bessel object; power-series evaluation with
/// running-term truncation at 1e-16 relative, capped at 500 terms.
Complex bessel_i_reg(Nu nu, Complex w);

}  // namespace polyens
