#include "support.hpp"

#include <cmath>
#include <filesystem>
#include <unistd.h>

namespace hbs::test {

Contour circle(int n, double radius, Complex centre) {
  Contour c = polar_contour([&](double) { return radius; }, n);
  for (auto& p : c.points) p += centre;
  return c;
}

Contour ellipse(double a, double b, int n) {
  Contour c;
  for (int i = 0; i < n; ++i) {
    const double t = -kTwoPi * i / n;
    c.points.emplace_back(a * std::cos(t), b * std::sin(t));
  }
  return c;
}

Contour blob(int n) {
  return polar_contour(
      [](double t) { return 1.0 + 0.3 * std::cos(3 * t) + 0.15 * std::sin(2 * t) + 0.1 * std::cos(5 * t + 1.0); }, n);
}

std::vector<Contour> test_shapes() {
  std::vector<Contour> out;
  Contour egg;
  for (int i = 0; i < 400; ++i) {
    const double t = -kTwoPi * i / 400;
    egg.points.emplace_back(2.0 * std::cos(t), std::sin(t) + 0.3 * std::cos(2 * t));
  }
  out.push_back(egg);
  out.push_back(blob());
  out.push_back(polar_contour([](double t) { return 1.0 + 0.4 * std::cos(2 * t) + 0.2 * std::sin(t); }));
  out.push_back(polar_contour([](double t) { return 1.0 + 0.35 * std::pow(std::cos(t / 2), 8) + 0.1 * std::sin(3 * t); }));
  out.push_back(polar_contour([](double t) { return 1.0 + 0.2 * std::cos(t) + 0.15 * std::cos(3 * t + 0.4) + 0.05 * std::sin(4 * t); }));
  return out;
}

Contour transformed(const Contour& c, Complex factor, Complex shift) {
  Contour out = c;
  for (auto& p : out.points) p = factor * p + shift;
  return out;
}

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

bool is_simple(const std::vector<Complex>& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

std::string temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto base = std::filesystem::temp_directory_path() /
                    ("hbs_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  return base.string();
}

}  // namespace hbs::test
