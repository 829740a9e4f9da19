#include "polyens/contour.hpp"

#include <cmath>
#include <numbers>

namespace polyens {

namespace {

void validate(const ContourPath& p) {
  if (p.points < 8) throw PreconditionError("contour: need at least 8 points");
  if (p.kind == ContourPath::Kind::Circle && !(p.radius > 0.0)) {
    throw PreconditionError("contour: circle radius must be positive");
  }
}

}  // namespace

ContourPath ContourPath::circle(double center, double radius,
                                std::size_t points) {
  ContourPath p;
  p.kind = Kind::Circle;
  p.center = center;
  p.radius = radius;
  p.points = points;
  validate(p);
  return p;
}

ContourPath ContourPath::imaginary_axis(double truncation, std::size_t points) {
  ContourPath p;
  p.kind = Kind::ImaginaryAxis;
  p.truncation = truncation;
  p.points = points;
  validate(p);
  return p;
}

ContourPath ContourPath::negative_half_line(std::size_t points) {
  ContourPath p;
  p.kind = Kind::NegativeHalfLine;
  p.points = points;
  validate(p);
  return p;
}

Complex contour_integral(const ContourPath& path,
                         const std::function<Complex(Complex)>& f) {
  validate(path);
  CompensatedSumComplex acc;
  switch (path.kind) {
    case ContourPath::Kind::Circle: {
      // (1/2pi i) closed integral = (r/P) sum f(c + r e^{i th}) e^{i th}
      const double r = path.radius;
      const std::size_t np = path.points;
      for (std::size_t k = 0; k < np; ++k) {
        double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(np);
        Complex e = std::polar(1.0, theta);
        Complex u = path.center + r * e;
        Complex v = f(u);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NonConvergenceError("contour: integrand not finite at node");
        }
        acc.add(v * e);
      }
      return acc.value() * (r / static_cast<double>(np));
    }
    case ContourPath::Kind::ImaginaryAxis: {
      QuadratureRule rule = gauss_hermite(path.points);
      for (std::size_t k = 0; k < rule.size(); ++k) {
        double t = rule.nodes[k];
        if (std::abs(t) > path.truncation) continue;
        Complex v = f(Complex(0.0, t));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NonConvergenceError("contour: integrand not finite at node");
        }
        acc.add(rule.weights[k] * v);
      }
      return Complex(0.0, 1.0) * acc.value();
    }
    case ContourPath::Kind::NegativeHalfLine: {
      QuadratureRule rule = gauss_laguerre(path.points, 0.0);
      for (std::size_t k = 0; k < rule.size(); ++k) {
        Complex v = f(Complex(-rule.nodes[k], 0.0));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NonConvergenceError("contour: integrand not finite at node");
        }
        acc.add(rule.weights[k] * v);
      }
      return acc.value();
    }
  }
  throw PreconditionError("contour: unknown path kind");
}

}  // namespace polyens
