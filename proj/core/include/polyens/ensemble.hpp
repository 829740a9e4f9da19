#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/quadrature.hpp"
#include "polyens/young.hpp"

namespace polyens {

/// Joint density on I^N proportional to Delta_N(x) det[phi_l(x_k)]. Holds
/// the N weight functions and a quadrature rule adapted to I; immutable
/// after construction and safe for shared concurrent reads.
class PolynomialEnsemble {
 public:
  using PhiFunction = std::function<double(double)>;
  enum class Domain { RealLine, PositiveHalfLine, Interval };

  PolynomialEnsemble(std::vector<PhiFunction> phi, Domain domain,
                     QuadratureKind rule_kind, std::vector<double> rule_params,
                     std::size_t line_nodes);

  std::size_t size() const { return phi_.size(); }
  Domain domain() const { return domain_; }
  std::size_t line_nodes() const { return line_nodes_; }

  double phi(std::size_t l, double x) const { return phi_[l](x); }
  const PhiFunction& phi_function(std::size_t l) const { return phi_[l]; }

  const QuadratureRule& rule() const { return rule_; }
  const QuadratureRule& rule_fine() const { return rule_fine_; }
  /// Fresh rule of the ensemble's kind at an arbitrary node count.
  QuadratureRule make_rule(std::size_t n) const;

  /// Plain integral over I at a fixed rule (no gate).
  Complex integrate_with(const QuadratureRule& rule,
                         const std::function<Complex(double)>& f) const;
  /// Gated integral: evaluated on the coarse and fine rules, mismatch
  /// beyond 1e-8 relative raises NonConvergenceError.
  Gated<Complex> integrate(const std::function<Complex(double)>& f) const;

 private:
  friend double partition_function(const PolynomialEnsemble&);

  std::vector<PhiFunction> phi_;
  Domain domain_;
  QuadratureKind rule_kind_;
  std::vector<double> rule_params_;
  std::size_t line_nodes_;
  QuadratureRule rule_;
  QuadratureRule rule_fine_;

  struct ZCache {
    std::once_flag flag;
    double value = 0.0;
    double gap = 0.0;
  };
  std::shared_ptr<ZCache> zcache_ = std::make_shared<ZCache>();
};

/// Generalized moments A_{n,m} = int_I x^n phi_m(x) dx as a
/// (max_power+1) x N matrix; every entry passes the doubling gate.
ComplexMatrix moment_matrix(const PolynomialEnsemble& ens,
                            std::size_t max_power);

/// Z_N = N! (-1)^{N(N-1)/2} det[G] with g_{k,l} = A_{k-1,l}; cached after
/// the first call. Throws PreconditionError when the phi system is
/// degenerate (det[G] vanishes).
double partition_function(const PolynomialEnsemble& ens);

/// Joint density value at a point of I^N.
double density(const PolynomialEnsemble& ens, std::span<const double> xs);

/// Schur polynomial via the bialternant determinant ratio; 0 when the
/// diagram has more rows than variables.
Complex schur(const YoungDiagram& lambda, std::span<const Complex> xs);

/// Precomputed moment data shared by the Schur-average operations.
struct MomentTable {
  std::size_t n = 0;        // ensemble size N
  ComplexMatrix a;          // (max_power+1) x N moments
  ComplexMatrix q;          // inverse of Gtilde_{i,j} = A_{N-i,j}
  double gden = 0.0;        // det Gtilde (real part)
};
MomentTable build_moment_table(const PolynomialEnsemble& ens,
                               std::size_t max_power);

double schur_expectation(const MomentTable& table, const YoungDiagram& lambda);
double schur_expectation(const PolynomialEnsemble& ens,
                         const YoungDiagram& lambda);

/// The h_{r,s} indeterminates built from moments and the inverse of
/// Gtilde; the three-case definition (r<0, s>=N, main block).
double h_indeterminate(const MomentTable& table, long r, std::size_t s);
double h_indeterminate(const PolynomialEnsemble& ens, long r, std::size_t s);

/// det[h_{lambda_i - i + j, j-1}] of size k (any k >= l(lambda)).
double schur_h_determinant(const MomentTable& table, const YoungDiagram& lambda,
                           std::size_t k);

struct GiambelliCheck {
  double lhs = 0.0;        // E[s_lambda] by the determinant-ratio formula
  double rhs_hooks = 0.0;  // det of hook expectations (Frobenius grid)
  double rhs_h = 0.0;      // det[h_{...}] at k = l(lambda)
  double gap_hooks = 0.0;
  double gap_h = 0.0;
};
GiambelliCheck giambelli_check(const MomentTable& table,
                               const YoungDiagram& lambda);
GiambelliCheck giambelli_check(const PolynomialEnsemble& ens,
                               const YoungDiagram& lambda);

/// Equal-ratio determinant formula: assembles
/// E[prod D(z_m)/D(u_m)] from the injected single-ratio provider.
Complex equal_ratio_expectation(
    std::span<const Complex> zs, std::span<const Complex> us,
    const std::function<Complex(Complex, Complex)>& single_ratio);

struct InverseExpectationForms {
  Complex value;     // row-sum form through the transposed inverse of G
  Complex bordered;  // bordered-determinant form
  double gap = 0.0;
};
/// E[1 / D_N(y)] for y off the real axis. Both algebraic forms are
/// evaluated and must agree to 1e-9 relative.
InverseExpectationForms inverse_expectation_forms(const PolynomialEnsemble& ens,
                                                  Complex y);
Complex inverse_expectation(const PolynomialEnsemble& ens, Complex y);

/// Integer power by repeated multiplication (no complex logarithms).
Complex ipow(Complex base, unsigned exponent);

bool off_real_axis(Complex y);

}  // namespace polyens
