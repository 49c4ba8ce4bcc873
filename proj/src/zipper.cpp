#include "hbs/zipper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI{0.0, 1.0};

// Guard band around the slit and its tip.
constexpr double kSlitGuard = 1e-10;
constexpr double kTipSnap = 1e-12;

// Principal square root with -0.0 imaginary parts treated as +0.0, so values
// on the real axis approached from the upper half plane keep their branch.
Complex sqrt_upper(Complex w) {
  if (w.imag() == 0.0) w = Complex(w.real(), 0.0);
  return std::sqrt(w);
}

// Branch of sqrt(T^2 + 1) in the upper half plane for T in H minus the slit [0, i].
Complex open_slit(Complex t, bool strict) {
  const double at = std::abs(t);
  if (at <= kSlitGuard) return {1.0, 0.0};  // base of the slit, interior side
  if (std::abs(t * t + 1.0) <= kTipSnap) return {0.0, 0.0};
  if (strict && std::abs(t.real()) <= kSlitGuard * at && t.imag() > 0.0 && t.imag() < 1.0)
    throw Error(ErrorCode::BranchAmbiguity, "point lies on a zipper slit");
  Complex w = t * std::sqrt(1.0 + 1.0 / (t * t));
  if (w.imag() < 0.0 && w.imag() > -1e-14 * std::abs(w)) w = Complex(w.real(), 0.0);
  return w;
}

double open_slit_real(double x) {
  if (std::isinf(x)) return x;
  if (x == 0.0) return 1.0;
  return std::copysign(std::sqrt(x * x + 1.0), x);
}

double moebius_real(double x, double c, double d) {
  if (std::isinf(x)) return c == 0.0 ? x : -d / c;
  const double den = 1.0 - c * x;
  if (den == 0.0) return kInf;
  return d * x / den;
}

Complex terminal_stage(Complex w, double p) {
  Complex s = std::isinf(p) ? w : w / (1.0 - w / p);
  const Complex u = s * s;
  return (u - kI) / (u + kI);
}

}  // namespace

ZipperResult zipper_build(const Contour& boundary, ChainDirection direction) {
  const std::size_t n = boundary.points.size();
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "zipper needs at least 3 boundary points", "zipper");

  {
    std::vector<Complex> sorted = boundary.points;
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
      return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    for (std::size_t i = 1; i < n; ++i)
      if (sorted[i] == sorted[i - 1]) throw Error(ErrorCode::DuplicatePoints, "contour has repeated points", "zipper");
  }

  std::vector<Complex> z = boundary.points;
  if (direction == ChainDirection::Exterior) std::reverse(z.begin(), z.end());

  ZipperResult out;
  ConformalMapChain& ch = out.chain;
  ch.direction = direction;
  ch.first = z[0];
  ch.second = z[1];
  ch.c.reserve(n - 2);
  ch.d.reserve(n - 2);

  // Points 0..k-1 are already on the real axis (stored in `line`); the rest
  // live in the upper half plane (stored in `w`).
  std::vector<double> line(n, 0.0);
  std::vector<Complex> w(n);
  line[0] = kInf;
  line[1] = 0.0;
  for (std::size_t i = 2; i < n; ++i) {
    w[i] = kI * std::sqrt((z[i] - z[1]) / (z[i] - z[0]));
  }

  for (std::size_t k = 2; k < n; ++k) {
    const Complex q = w[k];
    if (!(q.imag() > 0.0) || !std::isfinite(q.imag()))
      throw Error(ErrorCode::SelfIntersection, "zipper pivot left the upper half plane at point " + std::to_string(k), "zipper");
    const double q2 = std::norm(q);
    const double c = q.real() / q2;
    const double d = q.imag() / q2;
    ch.c.push_back(c);
    ch.d.push_back(d);

    for (std::size_t i = 0; i < k; ++i) {
      if (i + 1 == k) {
        line[i] = 1.0;  // previous tip, interior side of the slit base
      } else {
        line[i] = open_slit_real(moebius_real(line[i], c, d));
      }
    }
    line[k] = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex t = d * w[i] / (1.0 - c * w[i]);
      w[i] = open_slit(t, false);
    }
  }
  ch.terminal = line[0];

  std::vector<Complex> mapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      mapped[i] = {1.0, 0.0};
      continue;
    }
    const double x = line[i];
    double s = std::isinf(ch.terminal) ? x : x / (1.0 - x / ch.terminal);
    if (i + 1 == n) s = 0.0;
    const double u = s * s;
    mapped[i] = (Complex(u, 0.0) - kI) / (Complex(u, 0.0) + kI);
  }
  if (direction == ChainDirection::Exterior) std::reverse(mapped.begin(), mapped.end());
  out.mapped = std::move(mapped);
  return out;
}

namespace {

Complex eval_from_upper(const ConformalMapChain& ch, Complex w) {
  for (std::size_t k = 0; k < ch.c.size(); ++k) {
    const Complex t = ch.d[k] * w / (1.0 - ch.c[k] * w);
    w = open_slit(t, true);
  }
  return terminal_stage(w, ch.terminal);
}

}  // namespace

Complex chain_eval(const ConformalMapChain& ch, Complex z) {
  if (z == ch.first) return {1.0, 0.0};
  const Complex r = (z - ch.second) / (z - ch.first);
  if (std::abs(r) == 0.0) return eval_from_upper(ch, {0.0, 0.0});
  return eval_from_upper(ch, kI * std::sqrt(r));
}

Complex chain_eval_infinity(const ConformalMapChain& ch) { return eval_from_upper(ch, kI); }

Complex chain_eval_inverse(const ConformalMapChain& ch, Complex w) {
  if (!(std::abs(w) <= 1.0 + 1e-12))
    throw Error(ErrorCode::DomainViolation, "inverse zipper map is defined on the closed unit disk only");
  if (std::abs(w - 1.0) < 1e-300) return ch.first;

  Complex u = kI * (1.0 + w) / (1.0 - w);
  if (u.imag() < 0.0) u = Complex(u.real(), 0.0);
  Complex s = sqrt_upper(u);
  if (!std::isinf(ch.terminal)) s = s / (1.0 + s / ch.terminal);

  for (std::size_t k = ch.c.size(); k-- > 0;) {
    if (s.imag() < 0.0) s = Complex(s.real(), 0.0);
    const Complex t = sqrt_upper(s - 1.0) * sqrt_upper(s + 1.0);
    s = t / (ch.d[k] + ch.c[k] * t);
  }
  if (s.imag() < 0.0) s = Complex(s.real(), 0.0);
  const Complex r = -s * s;
  return (ch.second - r * ch.first) / (1.0 - r);
}

Complex exterior_map(const ConformalMapChain& ch, Complex z) {
  if (ch.direction != ChainDirection::Exterior)
    throw Error(ErrorCode::DomainViolation, "exterior_map needs an exterior chain");
  if (std::isinf(z.real()) || std::isinf(z.imag())) return chain_eval_inverse(ch, {0.0, 0.0});
  if (std::abs(z) < 1.0 - 1e-12) throw Error(ErrorCode::DomainViolation, "exterior_map is defined for |z| >= 1");
  Complex w = 1.0 / z;
  if (std::abs(w) > 1.0) w /= std::abs(w);
  return chain_eval_inverse(ch, w);
}

}  // namespace hbs
