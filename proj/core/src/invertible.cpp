#include "polyens/invertible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "polyens/vandermonde.hpp"

namespace polyens {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

double factorial_d(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

Complex det_small(std::vector<Complex> m, std::size_t n) {
  // Row-pivoted elimination on a scratch buffer; n stays tiny here.
  Complex d = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(m[c * n + k], m[piv * n + k]);
      }
      d = -d;
    }
    Complex p = m[c * n + c];
    if (p == Complex(0.0)) return 0.0;
    d *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      Complex f = m[r * n + c] / p;
      for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return d;
}

std::vector<double> source_inverse_products(std::span<const double> a) {
  std::vector<double> inv(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    double p = 1.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
      if (m != n) p *= a[n] - a[m];
    }
    inv[n] = 1.0 / p;
  }
  return inv;
}

bool advance_odometer(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

bool all_distinct(const std::vector<std::size_t>& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j]) return false;
    }
  }
  return true;
}

void validate_ratio_query(const InvertibleEnsemble& ens,
                          std::span<const Complex> zs,
                          std::span<const Complex> ys) {
  if (ys.size() > ens.size()) {
    throw PreconditionError("ratio_expectation: need L <= N");
  }
  require_pairwise_distinct(zs, "ratio_expectation(zs)");
  require_pairwise_distinct(ys, "ratio_expectation(ys)");
  for (const Complex& y : ys) {
    if (!off_real_axis(y)) {
      throw PreconditionError("ratio_expectation: y on the real axis");
    }
    for (const Complex& z : zs) {
      if (std::abs(z - y) < 1e-8 * std::max({1.0, std::abs(z), std::abs(y)})) {
        throw PreconditionError("ratio_expectation: z coincides with a y");
      }
    }
  }
}

template <class Eval>
Gated<Complex> gate_two_level(Eval&& eval, const char* what) {
  Complex coarse = eval(false);
  Complex fine = eval(true);
  double gap = relative_gap(coarse, fine);
  if (!(gap <= kConvergenceTol) || !std::isfinite(fine.real()) ||
      !std::isfinite(fine.imag())) {
    throw NonConvergenceError(std::string(what) +
                              " did not converge: doubling gap " +
                              gap_string(gap));
  }
  return {fine, gap};
}

}  // namespace

InvertibleEnsemble::InvertibleEnsemble(Kind kind, std::vector<double> a, Nu nu,
                                       InvertibleOptions opts)
    : kind_(kind),
      a_(std::move(a)),
      nu_(nu),
      line_nodes_(opts.line_nodes),
      circle_points_(opts.circle_points),
      base_([&] {
        if (a_.empty()) {
          throw PreconditionError("invertible ensemble: need N >= 1");
        }
        require_pairwise_distinct(std::span<const double>(a_),
                                  "invertible ensemble source");
        if (line_nodes_ == 0) {
          line_nodes_ = kind_ == Kind::GueExt ? 128 : 200;
        }
        std::vector<PolynomialEnsemble::PhiFunction> phis;
        for (double al : a_) {
          if (kind_ == Kind::ChGueExt) {
            if (!(al > 0.0)) {
              throw PreconditionError(
                  "chgue_ext: source parameters must be positive");
            }
            double nv = nu_.value;
            phis.push_back([al, nv](double x) {
              return std::pow(x, nv) * std::exp(-(x + al)) *
                     bessel_i_reg(Nu(nv), Complex(al * x)).real();
            });
          } else {
            phis.push_back([al](double x) {
              double d = x - al;
              return std::exp(-d * d) / kSqrtPi;
            });
          }
        }
        if (kind_ == Kind::GueExt) {
          return PolynomialEnsemble(std::move(phis),
                                    PolynomialEnsemble::Domain::RealLine,
                                    QuadratureKind::Hermite, {}, line_nodes_);
        }
        return PolynomialEnsemble(
            std::move(phis), PolynomialEnsemble::Domain::PositiveHalfLine,
            QuadratureKind::Laguerre, {nu_.value}, line_nodes_);
      }()) {
  if (kind_ == Kind::GueExt) {
    aux_path_ = ContourPath::imaginary_axis(
        std::numeric_limits<double>::infinity(), line_nodes_);
    aux_rule_ = gauss_hermite(line_nodes_);
    aux_rule_fine_ = gauss_hermite(2 * line_nodes_);
  } else {
    aux_path_ = ContourPath::negative_half_line(line_nodes_);
    aux_rule_ = gauss_laguerre(line_nodes_, nu_.value);
    aux_rule_fine_ = gauss_laguerre(2 * line_nodes_, nu_.value);
  }
  self_certify();
}

InvertibleEnsemble gue_ext(std::vector<double> a, InvertibleOptions opts) {
  return InvertibleEnsemble(InvertibleEnsemble::Kind::GueExt, std::move(a),
                            Nu(0.0), opts);
}

InvertibleEnsemble chgue_ext(std::vector<double> a, Nu nu,
                             InvertibleOptions opts) {
  return InvertibleEnsemble(InvertibleEnsemble::Kind::ChGueExt, std::move(a),
                            nu, opts);
}

double InvertibleEnsemble::phi(double a, double x) const {
  if (kind_ == Kind::GueExt) {
    double d = x - a;
    return std::exp(-d * d) / kSqrtPi;
  }
  return std::pow(x, nu_.value) * std::exp(-(x + a)) *
         bessel_i_reg(nu_, Complex(a * x)).real();
}

double InvertibleEnsemble::pi(unsigned k, double a) const {
  double pm = 0.0, p = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    double next;
    if (kind_ == Kind::GueExt) {
      next = a * p + (static_cast<double>(i) / 2.0) * pm;
    } else {
      double di = i;
      next = (a + 2.0 * di + nu_.value + 1.0) * p - di * (di + nu_.value) * pm;
    }
    pm = p;
    p = next;
  }
  return p;
}

Complex InvertibleEnsemble::pi_complex(unsigned k, Complex s) const {
  Complex pm = 0.0, p = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    Complex next;
    if (kind_ == Kind::GueExt) {
      next = s * p + (static_cast<double>(i) / 2.0) * pm;
    } else {
      double di = i;
      next = (s + (2.0 * di + nu_.value + 1.0)) * p -
             di * (di + nu_.value) * pm;
    }
    pm = p;
    p = next;
  }
  return p;
}

std::vector<std::vector<double>> InvertibleEnsemble::pi_coefficients(
    unsigned k) const {
  std::vector<std::vector<double>> cs;
  cs.push_back({1.0});
  if (k >= 1) {
    if (kind_ == Kind::GueExt) {
      cs.push_back({0.0, 1.0});
    } else {
      cs.push_back({nu_.value + 1.0, 1.0});
    }
  }
  for (unsigned i = 1; i < k; ++i) {
    std::vector<double> next(i + 2, 0.0);
    for (std::size_t j = 0; j < cs[i].size(); ++j) next[j + 1] += cs[i][j];
    if (kind_ == Kind::GueExt) {
      for (std::size_t j = 0; j < cs[i - 1].size(); ++j) {
        next[j] += (static_cast<double>(i) / 2.0) * cs[i - 1][j];
      }
    } else {
      double di = i;
      for (std::size_t j = 0; j < cs[i].size(); ++j) {
        next[j] += (2.0 * di + nu_.value + 1.0) * cs[i][j];
      }
      for (std::size_t j = 0; j < cs[i - 1].size(); ++j) {
        next[j] -= di * (di + nu_.value) * cs[i - 1][j];
      }
    }
    cs.push_back(std::move(next));
  }
  return cs;
}

Complex InvertibleEnsemble::phi_analytic(Complex a, double x) const {
  if (kind_ == Kind::GueExt) {
    Complex d = Complex(x) - a;
    return std::exp(-d * d) / kSqrtPi;
  }
  return std::pow(Complex(x), nu_.value) * std::exp(-(x + a)) *
         bessel_i_reg(nu_, a * x);
}

Complex InvertibleEnsemble::inverse_transform(Complex s, Complex z) const {
  if (kind_ == Kind::GueExt) {
    Complex d = s - z;
    return Complex(0.0, 1.0) / kSqrtPi * std::exp(d * d);
  }
  Complex t = -s;
  return std::pow(t, nu_.value) * std::exp(z - t) * bessel_i_reg(nu_, -z * t);
}

InvertibleEnsemble::AuxGrid InvertibleEnsemble::grid_from_rule(
    const QuadratureRule& rule, Complex z) const {
  AuxGrid grid;
  grid.s.resize(rule.size());
  grid.r.resize(rule.size());
  if (kind_ == Kind::GueExt) {
    // s = -it running down the imaginary axis; that orientation is the one
    // under which the inverse identity maps pi_k to z^k (checked at
    // construction). e^{-t^2} is folded back into the raw weights.
    Complex zz = std::exp(z * z);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      double t = rule.nodes[k];
      double raw = rule.weights[k] * std::exp(-t * t);
      grid.s[k] = Complex(0.0, -t);
      grid.r[k] = raw / kSqrtPi * zz * std::exp(Complex(0.0, 2.0 * t) * z);
    }
  } else {
    // s = -t, t > 0; the factor t^nu e^{-t} of F cancels the rule's
    // classical weight.
    Complex ez = std::exp(z);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      double t = rule.nodes[k];
      double raw = rule.weights[k] * std::exp(nu_.value * std::log(t) - t);
      grid.s[k] = Complex(-t, 0.0);
      grid.r[k] = raw * ez * bessel_i_reg(nu_, -z * t);
    }
  }
  return grid;
}

InvertibleEnsemble::AuxGrid InvertibleEnsemble::aux_grid(Complex z,
                                                         bool fine) const {
  return grid_from_rule(fine ? aux_rule_fine_ : aux_rule_, z);
}

InvertibleEnsemble::AuxGrid InvertibleEnsemble::aux_grid_custom(
    Complex z, std::size_t nodes) const {
  QuadratureRule rule = kind_ == Kind::GueExt
                            ? gauss_hermite(nodes)
                            : gauss_laguerre(nodes, nu_.value);
  return grid_from_rule(rule, z);
}

Complex InvertibleEnsemble::aux_integral_with(
    const AuxGrid& grid, const std::function<Complex(Complex)>& g) const {
  CompensatedSumComplex acc;
  for (std::size_t k = 0; k < grid.s.size(); ++k) {
    acc.add(grid.r[k] * g(grid.s[k]));
  }
  return acc.value();
}

Gated<Complex> InvertibleEnsemble::aux_integral(
    Complex z, const std::function<Complex(Complex)>& g) const {
  return gate_two_level(
      [&](bool fine) { return aux_integral_with(aux_grid(z, fine), g); },
      "aux contour integral");
}

void InvertibleEnsemble::self_certify() const {
  const Complex z0(0.7, 0.2);
  for (unsigned k = 0; k <= 4; ++k) {
    for (double al : a_) {
      auto f = [this, k, al](double x) -> Complex {
        return ipow(Complex(x), k) * phi(al, x);
      };
      Complex lhs = base_.integrate(f).value;
      double rhs = pi(k, al);
      if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, std::abs(rhs))) {
        throw NonConvergenceError(
            "invertible ensemble self-certification failed: moment identity "
            "at k=" + std::to_string(k));
      }
    }
    Complex lhs =
        aux_integral(z0, [this, k](Complex s) { return pi_complex(k, s); })
            .value;
    Complex rhs = ipow(z0, k);
    if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, std::abs(rhs))) {
      throw NonConvergenceError(
          "invertible ensemble self-certification failed: inverse identity "
          "at k=" + std::to_string(k));
    }
  }
}

namespace {

/// One evaluation level of the master formula. The u-contours are residue
/// sums over the source points; the coupled outer quadratures are summed
/// in their determinant-factored form (exactly the tensor-product sum over
/// the same nodes, reassociated).
Complex evaluate_ratio(const InvertibleEnsemble& ens,
                       std::span<const Complex> zs,
                       std::span<const Complex> ys, bool fine) {
  const std::size_t big_n = ens.size();
  const std::size_t m = zs.size();
  const std::size_t l = ys.size();
  std::span<const double> a = ens.source();

  if (m == 0 && l == 0) return 1.0;

  std::vector<InvertibleEnsemble::AuxGrid> grids;
  grids.reserve(m);
  for (std::size_t j = 0; j < m; ++j) grids.push_back(ens.aux_grid(zs[j], fine));

  // Powers of the aux nodes (shared across numerator points).
  std::size_t aux_nodes = m > 0 ? grids[0].s.size() : 0;
  std::vector<std::vector<Complex>> spow(m, std::vector<Complex>(aux_nodes));
  if (m > 0) {
    for (std::size_t k = 0; k < aux_nodes; ++k) {
      Complex p = 1.0;
      for (std::size_t e = 0; e < m; ++e) {
        spow[e][k] = p;
        p *= grids[0].s[k];
      }
    }
  }

  std::vector<double> inv_prod = source_inverse_products(a);

  // S(mask) = det over numerator points of the aux integrals with the
  // masked source factors removed: rows are powers M-1..0.
  std::map<unsigned long long, Complex> s_memo;
  auto s_det = [&](unsigned long long mask) -> Complex {
    if (m == 0) return 1.0;
    auto it = s_memo.find(mask);
    if (it != s_memo.end()) return it->second;
    std::vector<Complex> pm(aux_nodes);
    for (std::size_t k = 0; k < aux_nodes; ++k) {
      Complex p = 1.0;
      for (std::size_t n = 0; n < big_n; ++n) {
        if (!(mask >> n & 1ULL)) p *= grids[0].s[k] - a[n];
      }
      pm[k] = p;
    }
    std::vector<Complex> mat(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        CompensatedSumComplex acc;
        for (std::size_t k = 0; k < aux_nodes; ++k) {
          acc.add(grids[j].r[k] * spow[m - 1 - i][k] * pm[k]);
        }
        mat[i * m + j] = acc.value();
      }
    }
    Complex d = det_small(std::move(mat), m);
    s_memo.emplace(mask, d);
    return d;
  };

  if (l == 0) {
    Complex dz = vandermonde(zs);
    return s_det(0) / dz;
  }

  // V table: rows L-1..0 powers of v, columns (denominator index, residue
  // index).
  const QuadratureRule& vr = fine ? ens.base().rule_fine() : ens.base().rule();
  const std::size_t vn = vr.size();
  std::vector<Complex> common(vn);
  std::vector<std::vector<double>> phiv(big_n, std::vector<double>(vn));
  for (std::size_t k = 0; k < vn; ++k) {
    double v = vr.nodes[k];
    Complex c = 1.0;
    for (const Complex& z : zs) c *= (z - v);
    for (const Complex& y : ys) c /= (y - v);
    common[k] = c * vr.weights[k];
    for (std::size_t n = 0; n < big_n; ++n) phiv[n][k] = ens.phi(a[n], v);
  }
  // (v / y_l)^{N-L} per denominator point and node
  std::vector<std::vector<Complex>> ypow(l, std::vector<Complex>(vn));
  for (std::size_t li = 0; li < l; ++li) {
    for (std::size_t k = 0; k < vn; ++k) {
      ypow[li][k] =
          ipow(Complex(vr.nodes[k]) / ys[li], static_cast<unsigned>(big_n - l));
    }
  }
  std::vector<std::vector<double>> vpow(l, std::vector<double>(vn));
  for (std::size_t k = 0; k < vn; ++k) {
    double p = 1.0;
    for (std::size_t e = 0; e < l; ++e) {
      vpow[e][k] = p;
      p *= vr.nodes[k];
    }
  }
  // vtab[i][li][n]
  std::vector<Complex> vtab(l * l * big_n);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t li = 0; li < l; ++li) {
      for (std::size_t n = 0; n < big_n; ++n) {
        CompensatedSumComplex acc;
        for (std::size_t k = 0; k < vn; ++k) {
          acc.add(common[k] * vpow[l - 1 - i][k] * ypow[li][k] * phiv[n][k]);
        }
        vtab[(i * l + li) * big_n + n] = acc.value();
      }
    }
  }

  // Sum over ordered tuples of distinct residue points.
  CompensatedSumComplex total;
  std::vector<std::size_t> tup(l, 0);
  std::vector<Complex> atup(l);
  std::vector<Complex> vmat(l * l);
  do {
    if (!all_distinct(tup)) continue;
    unsigned long long mask = 0;
    double factor = 1.0;
    for (std::size_t li = 0; li < l; ++li) {
      mask |= 1ULL << tup[li];
      factor *= inv_prod[tup[li]];
      atup[li] = a[tup[li]];
    }
    Complex dva = vandermonde(std::span<const Complex>(atup));
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t li = 0; li < l; ++li) {
        vmat[i * l + li] = vtab[(i * l + li) * big_n + tup[li]];
      }
    }
    Complex vdet = det_small(vmat, l);
    total.add(dva * factor * s_det(mask) * vdet);
  } while (advance_odometer(tup, big_n));

  double sign = (l * (l - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  Complex pref = sign / factorial_d(l);
  if (m > 0) pref /= vandermonde(zs);
  return pref * total.value();
}

}  // namespace

Gated<Complex> ratio_expectation_full(const InvertibleEnsemble& ens,
                                      const RatioQuery& q) {
  validate_ratio_query(ens, q.zs, q.ys);
  return gate_two_level(
      [&](bool fine) { return evaluate_ratio(ens, q.zs, q.ys, fine); },
      "ratio_expectation");
}

Complex ratio_expectation(const InvertibleEnsemble& ens, const RatioQuery& q) {
  return ratio_expectation_full(ens, q).value;
}

Gated<Complex> product_expectation_full(const InvertibleEnsemble& ens,
                                        std::span<const Complex> zs) {
  require_pairwise_distinct(zs, "product_expectation(zs)");
  const std::size_t m = zs.size();
  if (m == 0) return {Complex(1.0), 0.0};
  std::span<const double> a = ens.source();
  auto eval = [&](bool fine) -> Complex {
    std::vector<Complex> mat(m * m);
    for (std::size_t j = 0; j < m; ++j) {
      auto grid = ens.aux_grid(zs[j], fine);
      for (std::size_t i = 0; i < m; ++i) {
        // B_i(z) = int F(s,z) s^{M-i} prod_n (s - a_n) ds, i = 1..M
        CompensatedSumComplex acc;
        for (std::size_t k = 0; k < grid.s.size(); ++k) {
          Complex p = ipow(grid.s[k], static_cast<unsigned>(m - 1 - i));
          for (double an : a) p *= grid.s[k] - an;
          acc.add(grid.r[k] * p);
        }
        mat[i * m + j] = acc.value();
      }
    }
    return det_small(std::move(mat), m) / vandermonde(zs);
  };
  return gate_two_level(eval, "product_expectation");
}

Complex product_expectation(const InvertibleEnsemble& ens,
                            std::span<const Complex> zs) {
  return product_expectation_full(ens, zs).value;
}

Gated<Complex> ratio_m_plus_one_over_one_full(const InvertibleEnsemble& ens,
                                              std::span<const Complex> zs,
                                              Complex y) {
  if (zs.empty()) {
    throw PreconditionError(
        "ratio_m_plus_one_over_one: need at least one numerator point (the "
        "bare inverse has its own path)");
  }
  require_pairwise_distinct(zs, "ratio_m_plus_one_over_one(zs)");
  if (!off_real_axis(y)) {
    throw PreconditionError("ratio_m_plus_one_over_one: y on the real axis");
  }
  const std::size_t mp1 = zs.size();
  const std::size_t m = mp1 - 1;
  const std::size_t big_n = ens.size();
  std::span<const double> a = ens.source();
  std::vector<double> inv_prod = source_inverse_products(a);

  auto eval = [&](bool fine) -> Complex {
    std::vector<InvertibleEnsemble::AuxGrid> grids;
    grids.reserve(mp1);
    for (std::size_t j = 0; j < mp1; ++j) {
      grids.push_back(ens.aux_grid(zs[j], fine));
    }
    const std::size_t nodes = grids[0].s.size();
    std::vector<Complex> prod_all(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      Complex p = 1.0;
      for (double an : a) p *= grids[0].s[k] - an;
      prod_all[k] = p;
    }
    // Shared rows B_1..B_M with powers M-1..0.
    std::vector<Complex> brows(m * mp1);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < mp1; ++j) {
        CompensatedSumComplex acc;
        for (std::size_t k = 0; k < nodes; ++k) {
          acc.add(grids[j].r[k] *
                  ipow(grids[0].s[k], static_cast<unsigned>(m - 1 - r)) *
                  prod_all[k]);
        }
        brows[r * mp1 + j] = acc.value();
      }
    }
    const QuadratureRule& vr =
        fine ? ens.base().rule_fine() : ens.base().rule();
    CompensatedSumComplex total;
    for (std::size_t res = 0; res < big_n; ++res) {
      std::vector<Complex> mat(mp1 * mp1);
      for (std::size_t j = 0; j < mp1; ++j) {
        CompensatedSumComplex acc;
        for (std::size_t k = 0; k < nodes; ++k) {
          acc.add(grids[j].r[k] * prod_all[k] /
                  (grids[0].s[k] - a[res]));
        }
        mat[j] = acc.value();  // first row: A(z_j, a_res)
        for (std::size_t r = 0; r < m; ++r) {
          mat[(r + 1) * mp1 + j] = brows[r * mp1 + j];
        }
      }
      Complex detl = det_small(std::move(mat), mp1);
      CompensatedSumComplex vint;
      for (std::size_t k = 0; k < vr.size(); ++k) {
        double v = vr.nodes[k];
        Complex t = ipow(Complex(v) / y, static_cast<unsigned>(big_n - 1)) /
                    (y - v);
        for (const Complex& z : zs) t *= (z - v);
        vint.add(vr.weights[k] * t * ens.phi(a[res], v));
      }
      total.add(detl * vint.value() * inv_prod[res]);
    }
    double sign = m % 2 == 0 ? 1.0 : -1.0;
    return sign / vandermonde(zs) * total.value();
  };
  return gate_two_level(eval, "ratio_m_plus_one_over_one");
}

Complex ratio_m_plus_one_over_one(const InvertibleEnsemble& ens,
                                  std::span<const Complex> zs, Complex y) {
  return ratio_m_plus_one_over_one_full(ens, zs, y).value;
}

double kernel(const InvertibleEnsemble& ens, double x, double y) {
  const std::size_t big_n = ens.size();
  std::span<const double> a = ens.source();
  std::vector<double> inv_prod = source_inverse_products(a);
  auto pis = ens.pi_coefficients(big_n == 0 ? 0 : static_cast<unsigned>(big_n - 1));

  double total = 0.0;
  for (std::size_t res = 0; res < big_n; ++res) {
    // p(s) = prod_{n != res} (s - a_n), ascending coefficients
    std::vector<double> c{1.0};
    for (std::size_t n = 0; n < big_n; ++n) {
      if (n == res) continue;
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        next[j] += -a[n] * c[j];
        next[j + 1] += c[j];
      }
      c = std::move(next);
    }
    // Expand p in the monic pi basis; the inverse identity then maps the
    // s-integral of F(s,x) p(s) exactly to the same coefficients against
    // powers of x.
    std::vector<double> image(c.size(), 0.0);
    for (std::size_t k = c.size(); k-- > 0;) {
      image[k] = c[k];
      const auto& pk = pis[k];
      for (std::size_t j = 0; j < pk.size(); ++j) c[j] -= image[k] * pk[j];
    }
    double r = 0.0;
    for (std::size_t k = image.size(); k-- > 0;) r = r * x + image[k];
    total += ens.phi(a[res], y) * r * inv_prod[res];
  }
  return total;
}

Complex ratio_expectation_tensor(const InvertibleEnsemble& ens,
                                 const RatioQuery& q,
                                 std::size_t nodes_per_axis,
                                 UContourMode mode) {
  validate_ratio_query(ens, q.zs, q.ys);
  std::span<const Complex> zs = q.zs;
  std::span<const Complex> ys = q.ys;
  const std::size_t big_n = ens.size();
  const std::size_t m = zs.size();
  const std::size_t l = ys.size();
  std::span<const double> a = ens.source();
  if (m == 0 && l == 0) return 1.0;
  if (mode == UContourMode::Circles && l > 1) {
    throw PreconditionError(
        "ratio_expectation_tensor: circle contours only supported for L <= 1");
  }
  double grid_size = std::pow(static_cast<double>(nodes_per_axis),
                              static_cast<double>(m + l));
  if (grid_size > 4e7) {
    throw PreconditionError(
        "ratio_expectation_tensor: tensor grid too large; this path is for "
        "validation at small node counts");
  }

  // Numerator axes: per-axis factor r_k * prod_n (s_k - a_n).
  std::vector<std::vector<Complex>> sfac(m);
  std::vector<Complex> snodes;
  for (std::size_t j = 0; j < m; ++j) {
    auto grid = ens.aux_grid_custom(zs[j], nodes_per_axis);
    if (j == 0) snodes = grid.s;
    sfac[j].resize(grid.s.size());
    for (std::size_t k = 0; k < grid.s.size(); ++k) {
      Complex p = 1.0;
      for (double an : a) p *= grid.s[k] - an;
      sfac[j][k] = grid.r[k] * p;
    }
  }

  QuadratureRule vr = ens.base().make_rule(nodes_per_axis);
  std::vector<std::vector<Complex>> vfac(l);
  std::vector<std::vector<double>> phiv(big_n,
                                        std::vector<double>(vr.size()));
  for (std::size_t k = 0; k < vr.size(); ++k) {
    for (std::size_t n = 0; n < big_n; ++n) {
      phiv[n][k] = ens.phi(a[n], vr.nodes[k]);
    }
  }
  for (std::size_t li = 0; li < l; ++li) {
    vfac[li].resize(vr.size());
    for (std::size_t k = 0; k < vr.size(); ++k) {
      double v = vr.nodes[k];
      Complex t = ipow(Complex(v) / ys[li], static_cast<unsigned>(big_n - l)) *
                  vr.weights[k];
      for (const Complex& z : zs) t *= (z - v);
      for (const Complex& y : ys) t /= (y - v);
      vfac[li][k] = t;
    }
  }

  std::vector<double> inv_prod = source_inverse_products(a);

  // Small circles around each source point for the validation mode.
  std::vector<ContourPath> circles;
  if (mode == UContourMode::Circles && l == 1) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < big_n; ++i) {
      for (std::size_t j = i + 1; j < big_n; ++j) {
        min_gap = std::min(min_gap, std::abs(a[i] - a[j]));
      }
    }
    double rho = big_n > 1 ? min_gap / 4.0 : 0.25;
    for (double an : a) {
      circles.push_back(ContourPath::circle(an, rho, ens.circle_points()));
    }
  }

  CompensatedSumComplex total;
  std::vector<std::size_t> sidx(m, 0);
  std::vector<Complex> stup(m), vtup(l), atup(l);
  bool smore = true;
  while (smore) {
    Complex sterm = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      sterm *= sfac[j][sidx[j]];
      stup[j] = snodes[sidx[j]];
    }
    sterm *= vandermonde(std::span<const Complex>(stup));

    if (l == 0) {
      total.add(sterm);
    } else {
      std::vector<std::size_t> vidx(l, 0);
      bool vmore = true;
      while (vmore) {
        Complex vterm = 1.0;
        for (std::size_t li = 0; li < l; ++li) {
          vterm *= vfac[li][vidx[li]];
          vtup[li] = vr.nodes[vidx[li]];
        }
        vterm *= vandermonde(std::span<const Complex>(vtup));

        Complex u_part = 0.0;
        if (mode == UContourMode::Residues) {
          std::vector<std::size_t> tup(l, 0);
          CompensatedSumComplex acc;
          do {
            if (!all_distinct(tup)) continue;
            Complex term = 1.0;
            for (std::size_t li = 0; li < l; ++li) {
              std::size_t n = tup[li];
              term *= phiv[n][vidx[li]] * inv_prod[n];
              for (std::size_t j = 0; j < m; ++j) term /= (stup[j] - a[n]);
              atup[li] = a[n];
            }
            acc.add(term * vandermonde(std::span<const Complex>(atup)));
          } while (advance_odometer(tup, big_n));
          u_part = acc.value();
        } else {
          // L == 1: sum of small-circle integrals, one per source point.
          double v = vr.nodes[vidx[0]];
          CompensatedSumComplex acc;
          for (const ContourPath& path : circles) {
            acc.add(contour_integral(path, [&](Complex u) {
              Complex val = ens.phi_analytic(u, v);
              for (double an : a) val /= (u - an);
              for (std::size_t j = 0; j < m; ++j) val /= (stup[j] - u);
              return val;
            }));
          }
          u_part = acc.value();
        }
        total.add(sterm * vterm * u_part);
        vmore = advance_odometer(vidx, vr.size());
      }
    }
    smore = m > 0 ? advance_odometer(sidx, snodes.size()) : false;
  }

  double sign = (l * (l - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  Complex pref = sign / factorial_d(l);
  if (m > 0) pref /= vandermonde(zs);
  return pref * total.value();
}

}  // namespace polyens
