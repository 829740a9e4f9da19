#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polyens/contour.hpp"
#include "polyens/ensemble.hpp"
#include "polyens/special_functions.hpp"

namespace polyens {

struct InvertibleOptions {
  std::size_t line_nodes = 0;  // 0 = kind default (128 Hermite, 200 Laguerre)
  std::size_t circle_points = 256;
};

/// Polynomial ensemble with phi_l(x) = phi(a_l, x), a closed-form monic
/// transform pi_k, and an inverse transform F over the auxiliary contour
/// I'. Two built-in families: Hermitian external-source (I = R, I' the
/// imaginary axis) and chiral external-source (I = R_+, I' the negative
/// half-line, branch-free Bessel form). Construction self-certifies both
/// inversion identities for k <= 4.
class InvertibleEnsemble {
 public:
  enum class Kind { GueExt, ChGueExt };

  Kind kind() const { return kind_; }
  std::size_t size() const { return a_.size(); }
  std::span<const double> source() const { return a_; }
  Nu nu() const { return nu_; }
  const PolynomialEnsemble& base() const { return base_; }
  const ContourPath& aux_path() const { return aux_path_; }
  std::size_t line_nodes() const { return line_nodes_; }
  std::size_t circle_points() const { return circle_points_; }

  double phi(double a, double x) const;
  /// phi with the source argument continued into the complex plane (the
  /// weights are entire in a); used by the circle-contour validation.
  Complex phi_analytic(Complex a, double x) const;
  /// Monic transform of x^k against phi(a, .).
  double pi(unsigned k, double a) const;
  Complex pi_complex(unsigned k, Complex s) const;
  /// Ascending monomial coefficients of pi_0..pi_k (k+1 rows).
  std::vector<std::vector<double>> pi_coefficients(unsigned k) const;
  /// F(s, z) for s on I'.
  Complex inverse_transform(Complex s, Complex z) const;

  /// Nodes s_k on I' and z-dependent reduced weights r_k with
  /// int_{I'} F(s,z) g(s) ds = sum_k r_k g(s_k); the rule's classical
  /// weight is folded into F analytically, so no large exponentials
  /// appear at any node.
  struct AuxGrid {
    std::vector<Complex> s;
    std::vector<Complex> r;
  };
  AuxGrid aux_grid(Complex z, bool fine) const;
  AuxGrid aux_grid_custom(Complex z, std::size_t nodes) const;

  Complex aux_integral_with(const AuxGrid& grid,
                            const std::function<Complex(Complex)>& g) const;
  /// Gated int_{I'} F(s,z) g(s) ds.
  Gated<Complex> aux_integral(Complex z,
                              const std::function<Complex(Complex)>& g) const;

 private:
  friend InvertibleEnsemble gue_ext(std::vector<double>, InvertibleOptions);
  friend InvertibleEnsemble chgue_ext(std::vector<double>, Nu,
                                      InvertibleOptions);
  InvertibleEnsemble(Kind kind, std::vector<double> a, Nu nu,
                     InvertibleOptions opts);
  void self_certify() const;
  AuxGrid grid_from_rule(const QuadratureRule& rule, Complex z) const;

  Kind kind_;
  std::vector<double> a_;
  Nu nu_;
  std::size_t line_nodes_;
  std::size_t circle_points_;
  PolynomialEnsemble base_;
  ContourPath aux_path_;
  QuadratureRule aux_rule_;
  QuadratureRule aux_rule_fine_;
};

InvertibleEnsemble gue_ext(std::vector<double> a, InvertibleOptions opts = {});
InvertibleEnsemble chgue_ext(std::vector<double> a, Nu nu,
                             InvertibleOptions opts = {});

struct RatioQuery {
  std::vector<Complex> zs;  // numerator points, anywhere in C
  std::vector<Complex> ys;  // denominator points, off the real axis
};

/// E[prod_m D(z_m) / prod_l D(y_l)] by the nested contour-integral master
/// formula; the u-contours are exact residue sums over the source points,
/// and the outer quadrature is evaluated in its determinant-factored form
/// (algebraically identical to the tensor-product sum over the same
/// nodes). Result passes the node-doubling gate.
Gated<Complex> ratio_expectation_full(const InvertibleEnsemble& ens,
                                      const RatioQuery& q);
Complex ratio_expectation(const InvertibleEnsemble& ens, const RatioQuery& q);

/// E[prod_m D(z_m)] as the M x M determinant ratio of one-dimensional
/// contour integrals.
Gated<Complex> product_expectation_full(const InvertibleEnsemble& ens,
                                        std::span<const Complex> zs);
Complex product_expectation(const InvertibleEnsemble& ens,
                            std::span<const Complex> zs);

/// E[prod_{m=1}^{M+1} D(z_m) / D(y)] through the bordered determinant with
/// first row A(z_j, u); zs supplies all M+1 numerator points (at least
/// one; use the inverse path for a bare 1/D(y)).
Gated<Complex> ratio_m_plus_one_over_one_full(const InvertibleEnsemble& ens,
                                              std::span<const Complex> zs,
                                              Complex y);
Complex ratio_m_plus_one_over_one(const InvertibleEnsemble& ens,
                                  std::span<const Complex> zs, Complex y);

/// Correlation kernel K_N(x, y). The u-contour collapses to residues; the
/// remaining s-integrand is then a polynomial times F, which the inversion
/// identity maps exactly to a polynomial in x, so no quadrature (and none
/// of its e^{x^2}-scale cancellation) is involved.
double kernel(const InvertibleEnsemble& ens, double x, double y);

/// Literal nested tensor-product evaluation of the master formula, for
/// validating the factored production path at small node counts. Circles
/// mode replaces the residue sums by trapezoid integrals over small
/// circles around each source point (L <= 1 only).
enum class UContourMode { Residues, Circles };
Complex ratio_expectation_tensor(const InvertibleEnsemble& ens,
                                 const RatioQuery& q,
                                 std::size_t nodes_per_axis,
                                 UContourMode mode = UContourMode::Residues);

}  // namespace polyens
