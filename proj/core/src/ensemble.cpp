#include "polyens/ensemble.hpp"

#include <cmath>
#include <string>

#include "polyens/vandermonde.hpp"

namespace polyens {

namespace {

double factorial_d(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double entry_gap(const Complex& a, const Complex& b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

ComplexMatrix moment_matrix_with(const PolynomialEnsemble& ens,
                                 const QuadratureRule& rule,
                                 std::size_t max_power) {
  const std::size_t n = ens.size();
  ComplexMatrix a(max_power + 1, n);
  for (std::size_t m = 0; m < n; ++m) {
    // One pass per column: accumulate all powers against phi_m.
    std::vector<CompensatedSumComplex> acc(max_power + 1);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      double x = rule.nodes[k];
      double w = rule.weights[k];
      double base = w * ens.phi(m, x);
      double p = 1.0;
      for (std::size_t pw = 0; pw <= max_power; ++pw) {
        acc[pw].add(base * p);
        p *= x;
      }
    }
    for (std::size_t pw = 0; pw <= max_power; ++pw) a(pw, m) = acc[pw].value();
  }
  return a;
}

}  // namespace

Complex ipow(Complex base, unsigned exponent) {
  Complex out = 1.0;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

bool off_real_axis(Complex y) {
  return std::abs(y.imag()) > 1e-10 * std::max(1.0, std::abs(y));
}

PolynomialEnsemble::PolynomialEnsemble(std::vector<PhiFunction> phi,
                                       Domain domain, QuadratureKind rule_kind,
                                       std::vector<double> rule_params,
                                       std::size_t line_nodes)
    : phi_(std::move(phi)),
      domain_(domain),
      rule_kind_(rule_kind),
      rule_params_(std::move(rule_params)),
      line_nodes_(line_nodes) {
  if (phi_.empty()) throw PreconditionError("PolynomialEnsemble: need N >= 1");
  if (line_nodes_ == 0) {
    throw PreconditionError("PolynomialEnsemble: need at least one node");
  }
  rule_ = gauss_rule(rule_kind_, line_nodes_, rule_params_);
  rule_fine_ = gauss_rule(rule_kind_, 2 * line_nodes_, rule_params_);
}

QuadratureRule PolynomialEnsemble::make_rule(std::size_t n) const {
  return gauss_rule(rule_kind_, n, rule_params_);
}

Complex PolynomialEnsemble::integrate_with(
    const QuadratureRule& rule, const std::function<Complex(double)>& f) const {
  return polyens::integrate(rule, f);
}

Gated<Complex> PolynomialEnsemble::integrate(
    const std::function<Complex(double)>& f) const {
  Complex coarse = integrate_with(rule_, f);
  Complex fine = integrate_with(rule_fine_, f);
  double gap = relative_gap(coarse, fine);
  if (!(gap <= kConvergenceTol) || !std::isfinite(fine.real()) ||
      !std::isfinite(fine.imag())) {
    throw NonConvergenceError("ensemble integral did not converge: gap " +
                              gap_string(gap));
  }
  return {fine, gap};
}

ComplexMatrix moment_matrix(const PolynomialEnsemble& ens,
                            std::size_t max_power) {
  ComplexMatrix coarse = moment_matrix_with(ens, ens.rule(), max_power);
  ComplexMatrix fine = moment_matrix_with(ens, ens.rule_fine(), max_power);
  for (std::size_t i = 0; i < fine.rows(); ++i) {
    for (std::size_t j = 0; j < fine.cols(); ++j) {
      double gap = entry_gap(coarse(i, j), fine(i, j));
      if (!(gap <= kConvergenceTol)) {
        throw NonConvergenceError(
            "moment_matrix: entry (" + std::to_string(i) + "," +
            std::to_string(j) + ") did not converge, gap " +
            gap_string(gap));
      }
    }
  }
  return fine;
}

double partition_function(const PolynomialEnsemble& ens) {
  auto cache = ens.zcache_;
  std::call_once(cache->flag, [&] {
    const std::size_t n = ens.size();
    ComplexMatrix a = moment_matrix(ens, n == 0 ? 0 : n - 1);
    ComplexMatrix g(n, n);
    double hadamard = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      double row = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        g(k, l) = a(k, l);
        row += std::norm(g(k, l));
      }
      hadamard *= std::sqrt(row);
    }
    Complex detg = det(g);
    if (std::abs(detg) <= 1e-10 * std::max(hadamard, 1e-300)) {
      throw PreconditionError(
          "partition_function: degenerate phi system (det G vanishes)");
    }
    double sign = (n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    cache->value = factorial_d(n) * sign * detg.real();
  });
  return cache->value;
}

double density(const PolynomialEnsemble& ens, std::span<const double> xs) {
  const std::size_t n = ens.size();
  if (xs.size() != n) {
    throw PreconditionError("density: expected " + std::to_string(n) +
                            " coordinates");
  }
  double z = partition_function(ens);
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) m(k, l) = ens.phi(l, xs[k]);
  }
  double value =
      (vandermonde(xs) * det(m)).real() / z;
  if (!std::isfinite(value)) {
    throw NonConvergenceError("density: non-finite value");
  }
  return value;
}

Complex schur(const YoungDiagram& lambda, std::span<const Complex> xs) {
  const std::size_t n = xs.size();
  if (lambda.length() > n) return 0.0;
  require_pairwise_distinct(xs, "schur(xs)");
  if (n == 0) return 1.0;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      unsigned power = lambda.part(j) + static_cast<unsigned>(n - 1 - j);
      m(i, j) = ipow(xs[i], power);
    }
  }
  return det(m) / vandermonde(xs);
}

MomentTable build_moment_table(const PolynomialEnsemble& ens,
                               std::size_t max_power) {
  const std::size_t n = ens.size();
  MomentTable table;
  table.n = n;
  table.a = moment_matrix(ens, std::max(max_power, n == 0 ? 0 : n - 1));
  ComplexMatrix gt(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gt(i, j) = table.a(n - 1 - i, j);
  }
  table.gden = det(gt).real();
  table.q = invert(gt);
  return table;
}

double schur_expectation(const MomentTable& table, const YoungDiagram& lambda) {
  const std::size_t n = table.n;
  if (lambda.length() > n) return 0.0;
  if (lambda.length() == 0) return 1.0;
  std::size_t need = lambda.part(0) + n - 1;
  if (need >= table.a.rows()) {
    throw PreconditionError("schur_expectation: moment table too small");
  }
  ComplexMatrix num(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      num(i, j) = table.a(lambda.part(i) + n - 1 - i, j);
    }
  }
  return det(num).real() / table.gden;
}

double schur_expectation(const PolynomialEnsemble& ens,
                         const YoungDiagram& lambda) {
  std::size_t top = lambda.length() == 0 ? 0 : lambda.part(0);
  MomentTable table = build_moment_table(ens, top + ens.size());
  return schur_expectation(table, lambda);
}

double h_indeterminate(const MomentTable& table, long r, std::size_t s) {
  if (r < 0) return 0.0;
  const std::size_t n = table.n;
  if (s >= n) return r == 0 ? 1.0 : 0.0;
  std::size_t power = n + static_cast<std::size_t>(r) - s - 1;
  if (power >= table.a.rows()) {
    throw PreconditionError("h_indeterminate: moment table too small");
  }
  CompensatedSumComplex acc;
  for (std::size_t v = 0; v < n; ++v) {
    acc.add(table.a(power, v) * table.q(v, s));
  }
  return acc.value().real();
}

double h_indeterminate(const PolynomialEnsemble& ens, long r, std::size_t s) {
  std::size_t extra = r > 0 ? static_cast<std::size_t>(r) : 0;
  MomentTable table = build_moment_table(ens, ens.size() + extra);
  return h_indeterminate(table, r, s);
}

double schur_h_determinant(const MomentTable& table, const YoungDiagram& lambda,
                           std::size_t k) {
  if (k < lambda.length()) {
    throw PreconditionError("schur_h_determinant: need k >= l(lambda)");
  }
  if (k == 0) return 1.0;
  ComplexMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      long r = static_cast<long>(lambda.part(i)) - static_cast<long>(i) +
               static_cast<long>(j);
      m(i, j) = h_indeterminate(table, r, j);
    }
  }
  return det(m).real();
}

GiambelliCheck giambelli_check(const MomentTable& table,
                               const YoungDiagram& lambda) {
  GiambelliCheck out;
  out.lhs = schur_expectation(table, lambda);

  FrobeniusCoords fc = frobenius(lambda);
  const std::size_t d = fc.d();
  if (d == 0) {
    out.rhs_hooks = 1.0;
  } else {
    ComplexMatrix hooks(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        hooks(i, j) =
            schur_expectation(table, hook_diagram(fc.p[i], fc.q[j]));
      }
    }
    out.rhs_hooks = det(hooks).real();
  }
  out.rhs_h = schur_h_determinant(table, lambda, lambda.length());

  double scale = std::max(1.0, std::abs(out.lhs));
  out.gap_hooks = std::abs(out.lhs - out.rhs_hooks) / scale;
  out.gap_h = std::abs(out.lhs - out.rhs_h) / scale;
  return out;
}

GiambelliCheck giambelli_check(const PolynomialEnsemble& ens,
                               const YoungDiagram& lambda) {
  std::size_t top = lambda.length() == 0 ? 0 : lambda.part(0);
  // Hook arms reach p_1 <= lambda_1; the h determinant needs powers up to
  // N + lambda_1 + l(lambda).
  MomentTable table =
      build_moment_table(ens, ens.size() + top + lambda.length() + 2);
  return giambelli_check(table, lambda);
}

Complex equal_ratio_expectation(
    std::span<const Complex> zs, std::span<const Complex> us,
    const std::function<Complex(Complex, Complex)>& single_ratio) {
  if (zs.size() != us.size()) {
    throw PreconditionError("equal_ratio_expectation: need |zs| == |us|");
  }
  const std::size_t m = zs.size();
  if (m == 0) return 1.0;
  require_pairwise_distinct(zs, "equal_ratio_expectation(zs)");
  require_pairwise_distinct(us, "equal_ratio_expectation(us)");
  for (const Complex& u : us) {
    if (!off_real_axis(u)) {
      throw PreconditionError("equal_ratio_expectation: u on the real axis");
    }
    for (const Complex& z : zs) {
      if (std::abs(u - z) < 1e-8 * std::max({1.0, std::abs(u), std::abs(z)})) {
        throw PreconditionError(
            "equal_ratio_expectation: z coincides with a u");
      }
    }
  }
  ComplexMatrix cauchy(m, m);
  ComplexMatrix weighted(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Complex c = 1.0 / (us[i] - zs[j]);
      cauchy(i, j) = c;
      weighted(i, j) = c * single_ratio(zs[j], us[i]);
    }
  }
  Complex dc = det(cauchy);
  if (std::abs(dc) < 1e-300) {
    throw PreconditionError("equal_ratio_expectation: singular Cauchy matrix");
  }
  return det(weighted) / dc;
}

InverseExpectationForms inverse_expectation_forms(const PolynomialEnsemble& ens,
                                                  Complex y) {
  if (!off_real_axis(y)) {
    throw PreconditionError("inverse_expectation: y must be off the real axis");
  }
  const std::size_t n = ens.size();
  ComplexMatrix a = moment_matrix(ens, n - 1);
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a(i, j);
  }
  ComplexMatrix c = invert(g);

  std::vector<Complex> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto integrand = [&, j](double u) -> Complex {
      return ipow(Complex(u) / y, static_cast<unsigned>(n - 1)) /
             (y - u) * ens.phi(j, u);
    };
    w[j] = ens.integrate(integrand).value;
  }

  InverseExpectationForms out;
  CompensatedSumComplex acc;
  for (std::size_t j = 0; j < n; ++j) acc.add(c(j, n - 1) * w[j]);
  out.value = acc.value();

  ComplexMatrix bordered = g;
  for (std::size_t j = 0; j < n; ++j) bordered(n - 1, j) = w[j];
  out.bordered = det(bordered) / det(g);

  out.gap = relative_gap(out.value, out.bordered);
  if (!(out.gap <= 1e-9)) {
    throw NonConvergenceError(
        "inverse_expectation: bordered and row-sum forms disagree, gap " +
        std::to_string(out.gap));
  }
  return out;
}

Complex inverse_expectation(const PolynomialEnsemble& ens, Complex y) {
  return inverse_expectation_forms(ens, y).value;
}

}  // namespace polyens
