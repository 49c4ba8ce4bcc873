#pragma once

#include <string>
#include <vector>

#include "hbs/complexgeom.hpp"
#include "hbs/contour.hpp"

namespace hbs::test {

/// Clockwise polygon sampling of r(t) e^{it}.
template <class Radius>
Contour polar_contour(Radius r, int n = 400) {
  Contour c;
  for (int i = 0; i < n; ++i) {
    const double t = -kTwoPi * i / n;
    c.points.push_back(std::polar(r(t), t));
  }
  c.orientation = Orientation::Clockwise;
  return c;
}

Contour circle(int n = 400, double radius = 1.0, Complex centre = {0.0, 0.0});
Contour ellipse(double a, double b, int n = 400);
/// Asymmetric smooth test shape with three lobes.
Contour blob(int n = 400);
/// Five asymmetric smooth shapes used by the round-trip and invariance checks.
std::vector<Contour> test_shapes();

Contour transformed(const Contour& c, Complex factor, Complex shift);
/// True when no two non-adjacent edges intersect.
bool is_simple(const std::vector<Complex>& p);

/// Unique scratch directory under the system temp path.
std::string temp_dir(const std::string& tag);

}  // namespace hbs::test
