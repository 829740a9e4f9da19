#include "polyens/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>

#include "polyens/special_functions.hpp"

namespace polyens {

namespace {

// Symmetric tridiagonal QL with implicit shifts, tracking only the first
// row of the eigenvector matrix (all a Gauss rule needs). Extended
// precision throughout: Laguerre nodes reach ~4n where double-precision
// weights denormalize.
struct Tridiagonal {
  std::vector<long double> diag;  // alpha_0..alpha_{n-1}
  std::vector<long double> sub;   // sqrt(beta_1)..sqrt(beta_{n-1})
};

void golub_welsch(Tridiagonal j, long double mu0,
                  std::vector<long double>& nodes,
                  std::vector<long double>& first_components) {
  const std::size_t n = j.diag.size();
  std::vector<long double>& d = j.diag;
  std::vector<long double> e = j.sub;
  e.push_back(0.0L);
  std::vector<long double> z(n, 0.0L);
  z[0] = 1.0L;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        long double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-19L * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw NonConvergenceError("gauss_rule: tridiagonal QL failed");
        }
        long double g = (d[l + 1] - d[l]) / (2.0L * e[l]);
        long double r = std::hypot(g, 1.0L);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        long double s = 1.0L, c = 1.0L, p = 0.0L;
        for (std::size_t i = m; i-- > l;) {
          long double f = s * e[i];
          long double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0L) {
            d[i + 1] -= p;
            e[m] = 0.0L;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0L * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          long double zf = z[i + 1];
          z[i + 1] = s * z[i] + c * zf;
          z[i] = c * z[i] - s * zf;
        }
        if (r == 0.0L && m - l > 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0L;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  nodes.resize(n);
  first_components.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = d[order[i]];
    first_components[i] = z[order[i]];
  }
  (void)mu0;
}

void require_positive_count(std::size_t n) {
  if (n == 0) throw PreconditionError("gauss_rule: need n >= 1");
}

}  // namespace

std::string gap_string(double gap) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", gap);
  return buf;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  require_positive_count(n);
  if (!(a < b)) throw PreconditionError("gauss_legendre: need a < b");
  Tridiagonal j;
  j.diag.assign(n, 0.0L);
  j.sub.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) {
    long double kk = static_cast<long double>(k);
    j.sub[k - 1] = std::sqrt(kk * kk / (4.0L * kk * kk - 1.0L));
  }
  std::vector<long double> t, z0;
  golub_welsch(j, 2.0L, t, z0);
  QuadratureRule rule;
  rule.kind = QuadratureKind::Legendre;
  rule.lower = a;
  rule.upper = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  long double half = (static_cast<long double>(b) - a) / 2.0L;
  long double mid = (static_cast<long double>(b) + a) / 2.0L;
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = static_cast<double>(mid + half * t[i]);
    rule.weights[i] = static_cast<double>(2.0L * z0[i] * z0[i] * half);
  }
  return rule;
}

QuadratureRule gauss_hermite(std::size_t n) {
  require_positive_count(n);
  // Folded weights carry e^{+x^2}; past ~360 nodes that leaves double range.
  if (n > 360) {
    throw PreconditionError("gauss_hermite: node counts above 360 overflow "
                            "the folded weights");
  }
  Tridiagonal j;
  j.diag.assign(n, 0.0L);
  j.sub.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) {
    j.sub[k - 1] = std::sqrt(static_cast<long double>(k) / 2.0L);
  }
  std::vector<long double> t, z0;
  const long double mu0 = std::sqrt(3.14159265358979323846264338327950288L);
  golub_welsch(j, mu0, t, z0);
  QuadratureRule rule;
  rule.kind = QuadratureKind::Hermite;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = static_cast<double>(t[i]);
    long double w = mu0 * z0[i] * z0[i];
    rule.weights[i] = static_cast<double>(w * std::exp(t[i] * t[i]));
  }
  return rule;
}

QuadratureRule gauss_laguerre(std::size_t n, double alpha) {
  require_positive_count(n);
  if (!(alpha > -1.0)) throw PreconditionError("gauss_laguerre: need alpha > -1");
  if (n > 2500) {
    throw PreconditionError("gauss_laguerre: node counts above 2500 exceed "
                            "extended-precision range");
  }
  Tridiagonal j;
  j.diag.resize(n);
  j.sub.resize(n > 0 ? n - 1 : 0);
  long double al = alpha;
  for (std::size_t k = 0; k < n; ++k) {
    j.diag[k] = 2.0L * k + al + 1.0L;
    if (k + 1 < n) {
      long double kk = static_cast<long double>(k + 1);
      j.sub[k] = std::sqrt(kk * (kk + al));
    }
  }
  std::vector<long double> t, z0;
  const long double mu0 = std::exp(static_cast<long double>(log_gamma(alpha + 1.0)));
  golub_welsch(j, mu0, t, z0);
  QuadratureRule rule;
  rule.kind = QuadratureKind::Laguerre;
  rule.alpha = alpha;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = static_cast<double>(t[i]);
    long double w = mu0 * z0[i] * z0[i];
    // plain-measure weight: w * x^{-alpha} e^{x}, assembled in long double
    long double folded = w * std::exp(t[i] - al * std::log(t[i]));
    rule.weights[i] = static_cast<double>(folded);
  }
  return rule;
}

QuadratureRule gauss_rule(QuadratureKind kind, std::size_t n,
                          const std::vector<double>& params) {
  switch (kind) {
    case QuadratureKind::Legendre: {
      double a = params.size() > 0 ? params[0] : -1.0;
      double b = params.size() > 1 ? params[1] : 1.0;
      return gauss_legendre(n, a, b);
    }
    case QuadratureKind::Hermite:
      return gauss_hermite(n);
    case QuadratureKind::Laguerre:
      return gauss_laguerre(n, params.empty() ? 0.0 : params[0]);
  }
  throw PreconditionError("gauss_rule: unsupported kind");
}

}  // namespace polyens
