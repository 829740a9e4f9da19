#pragma once

#include <functional>
#include <limits>

#include "polyens/quadrature.hpp"

namespace polyens {

/// Parametrized integration path in the complex plane. Only the three
/// shapes the formulas need: a counter-clockwise circle, the imaginary
/// axis, and the negative real half-line.
struct ContourPath {
  enum class Kind { Circle, ImaginaryAxis, NegativeHalfLine };

  Kind kind = Kind::Circle;
  double center = 0.0;
  double radius = 1.0;
  std::size_t points = 256;
  double truncation = std::numeric_limits<double>::infinity();

  static ContourPath circle(double center, double radius, std::size_t points);
  static ContourPath imaginary_axis(double truncation, std::size_t points);
  static ContourPath negative_half_line(std::size_t points);
};

/// Path integral of f.
///
/// Circle: equispaced-angle trapezoid, counter-clockwise, INCLUDING the
/// 1/(2 pi i) normalization, so a simple pole of residue r inside gives r.
/// Imaginary axis: i * integral of f(it) dt, t ascending, Gauss-Hermite in
/// t (integrand must decay like e^{-t^2}); nodes beyond |t| > truncation
/// are dropped. Negative half-line: integral of f(s) ds for s from -inf to
/// 0, Gauss-Laguerre in t = -s (integrand must decay like e^{-t}).
Complex contour_integral(const ContourPath& path,
                         const std::function<Complex(Complex)>& f);

}  // namespace polyens
