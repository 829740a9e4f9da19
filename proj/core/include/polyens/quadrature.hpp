#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/errors.hpp"

namespace polyens {

enum class QuadratureKind { Legendre, Hermite, Laguerre };

/// Gauss rule with the classical weight function folded into the weights,
/// i.e. sum_k weights[k] * f(nodes[k]) approximates the plain integral of f
/// over the rule's domain, for f decaying at least like the classical
/// weight (e^{-x^2} for Hermite, x^alpha e^{-x} for Laguerre). Folding is
/// done in extended precision so that large node counts (Laguerre nodes
/// reach ~4n) neither overflow nor underflow.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::Legendre;
  double lower = -1.0;   // Legendre interval
  double upper = 1.0;
  double alpha = 0.0;    // Laguerre exponent
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, plain-measure

  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(std::size_t n, double a, double b);
QuadratureRule gauss_hermite(std::size_t n);
QuadratureRule gauss_laguerre(std::size_t n, double alpha = 0.0);

/// Dispatch on kind; params = {a,b} for Legendre, {alpha} for Laguerre.
QuadratureRule gauss_rule(QuadratureKind kind, std::size_t n,
                          const std::vector<double>& params = {});

/// Neumaier-compensated accumulator; summation order is the caller's
/// iteration order (ascending node index everywhere in this toolkit).
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedSumComplex {
 public:
  void add(const Complex& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

template <class F>
Complex integrate(const QuadratureRule& rule, F&& f) {
  CompensatedSumComplex acc;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    acc.add(rule.weights[k] * Complex(f(rule.nodes[k])));
  }
  return acc.value();
}

/// Relative gap used by the self-convergence gate: |b-a| measured against
/// the larger magnitude with a unit floor.
inline double relative_gap(const Complex& a, const Complex& b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(b - a) / scale;
}

template <class T>
struct Gated {
  T value{};
  double gap = 0.0;
};

constexpr double kConvergenceTol = 1e-8;

/// Scientific-notation rendering for diagnostics (std::to_string flattens
/// small gaps to zero).
std::string gap_string(double gap);

/// Evaluate at n and 2n nodes; mismatch beyond tol is an error, never a
/// silently returned value.
template <class Eval>
Gated<Complex> converge(Eval&& eval_at, std::size_t n,
                        double tol = kConvergenceTol) {
  Complex v1 = eval_at(n);
  Complex v2 = eval_at(2 * n);
  double gap = relative_gap(v1, v2);
  if (!(gap <= tol) || !std::isfinite(v2.real()) || !std::isfinite(v2.imag())) {
    throw NonConvergenceError("quadrature did not converge: gap " +
                              gap_string(gap) + " at " +
                              std::to_string(2 * n) + " nodes");
  }
  return {v2, gap};
}

}  // namespace polyens
