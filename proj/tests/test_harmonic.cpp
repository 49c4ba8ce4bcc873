#include <gtest/gtest.h>

#include <random>

#include "hbs/harmonic.hpp"
#include "hbs/signature.hpp"
#include "support.hpp"

using namespace hbs;

namespace {

WeldingMap uniform_welding(int n, double shift = 0.0, double wobble = 0.0) {
  WeldingMap w;
  for (int j = 0; j < n; ++j) {
    const double phi = kTwoPi * j / n;
    w.phi.push_back(phi);
    w.omega.push_back(wrap_angle(phi + shift + wobble * std::sin(phi)));
  }
  return w;
}

NormalizedChains chains_of(const Contour& c) {
  return normalized_chains(resample_uniform(orient(c, Orientation::Clockwise), 200), 1e-5);
}

// Piecewise-linear interpolation of node values at an arbitrary disk point.
Complex sample(const HarmonicField& h, Complex z) {
  const DiskGrid& g = *h.grid;
  int f = g.locate(z);
  if (f < 0) {
    // Between the polygon and the circle: extend the nearest face's affine map.
    double best = 1e300;
    for (std::size_t i = 0; i < g.face_count(); ++i) {
      const auto& t = g.mesh.faces[i];
      const double d = std::abs((g.mesh.nodes[t[0]] + g.mesh.nodes[t[1]] + g.mesh.nodes[t[2]]) / 3.0 - z);
      if (d < best) {
        best = d;
        f = static_cast<int>(i);
      }
    }
  }
  const auto& t = g.mesh.faces[static_cast<std::size_t>(f)];
  const Complex a = g.mesh.nodes[t[0]], b = g.mesh.nodes[t[1]], c = g.mesh.nodes[t[2]];
  const auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double area = cross(b - a, c - a);
  const double wb = cross(z - a, c - a) / area, wc = cross(b - a, z - a) / area;
  return (1.0 - wb - wc) * h.values[t[0]] + wb * h.values[t[1]] + wc * h.values[t[2]];
}

}  // namespace

TEST(Welding, CircleGivesARotation) {
  const WeldingMap w = welding_from_chains(chains_of(test::circle(400)));
  ASSERT_EQ(w.size(), 200u);
  validate_welding(w);
  const double shift = w.omega[0] - w.phi[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    worst = std::max(worst, std::abs(std::arg(std::polar(1.0, w.omega[i] - w.phi[i] - shift))));
  EXPECT_LE(worst, 0.02);
}

TEST(Welding, EllipseIsMonotoneAndNotARotation) {
  const WeldingMap w = welding_from_chains(chains_of(test::ellipse(2.0, 1.0)));
  validate_welding(w);
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = std::arg(std::polar(1.0, w.omega[i] - w.phi[i]) / std::polar(1.0, w.omega[0] - w.phi[0]));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_GT(hi - lo, 0.1);
}

TEST(Welding, SwappedChainsAreRejected) {
  NormalizedChains c = chains_of(test::blob());
  std::swap(c.interior, c.exterior);
  std::swap(c.interior_fix, c.exterior_fix);
  try {
    const WeldingMap w = welding_from_chains(c);
    // A welding built from swapped sides must at least differ from the true one.
    const WeldingMap truth = welding_from_chains(chains_of(test::blob()));
    double diff = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) diff = std::max(diff, std::abs(w(w.phi[i]) - truth(w.phi[i])));
    EXPECT_GT(diff, 0.1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MonotonicityViolation);
  }
  WeldingMap bad = uniform_welding(10);
  std::swap(bad.omega[3], bad.omega[4]);
  EXPECT_THROW(validate_welding(bad), Error);
}

TEST(Poisson, IdentityWeldingExtendsToIdentity) {
  const auto g = build_disk_grid(100);
  const HarmonicField h = poisson_extend(uniform_welding(200), g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) worst = std::max(worst, std::abs(h.values[i] - g->mesh.nodes[i]));
  EXPECT_LE(worst, 5e-3);
}

TEST(Poisson, OriginIsTheWeightedBoundaryMean) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = build_disk_grid(40);
  for (int trial = 0; trial < 5; ++trial) {
    // Random monotone welding with uneven spacing.
    WeldingMap w;
    double phi = 0.0, omega = kTwoPi * u(rng);
    for (int j = 0; j < 60; ++j) {
      w.phi.push_back(phi);
      w.omega.push_back(wrap_angle(omega));
      phi += kTwoPi / 60 * (0.5 + u(rng)) * 0.99;
      omega += kTwoPi / 60 * (0.3 + 1.2 * u(rng)) * 0.99;
    }
    if (phi >= kTwoPi || omega - w.omega[0] >= kTwoPi) continue;
    Complex mean{0.0, 0.0};
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double gamma = wrap_angle(w.phi[j] - w.phi[(j + w.size() - 1) % w.size()]);
      mean += std::polar(1.0, w.omega[j]) * gamma;
    }
    mean /= kTwoPi;
    EXPECT_LT(std::abs(poisson_sum(w, 0.0) - mean), 1e-15);
    const HarmonicField h = poisson_extend(w, g);
    EXPECT_LT(std::abs(h.values[static_cast<std::size_t>(g->node_at(0, 0))] - mean), 1e-14);
  }
  // Constant target.
  WeldingMap c = uniform_welding(50);
  for (auto& o : c.omega) o = 0.4;
  EXPECT_LT(std::abs(poisson_sum(c, 0.0) - std::polar(1.0, 0.4)), 1e-14);
}

TEST(Harmonicity, StencilOnKnownFields) {
  const auto g = build_disk_grid(50);
  HarmonicField lin{g, g->mesh.nodes}, quad{g, std::vector<Complex>(g->node_count())};
  for (std::size_t i = 0; i < g->node_count(); ++i) quad.values[i] = std::norm(g->mesh.nodes[i]);
  EXPECT_LE(check_harmonicity(lin), 1e-10);
  EXPECT_NEAR(check_harmonicity(quad), 4.0, 1e-9);
}

TEST(Harmonicity, ExtensionResidualIsStencilTruncation) {
  // The 5-point stencil applied to an exactly harmonic function leaves an
  // O(h^4) remainder: halving the spacing at a fixed point divides it by 16.
  const WeldingMap w = welding_from_chains(chains_of(test::blob()));
  const int j = -47, k = 4;  // the point (-0.94, 0.08), where the residual peaks
  std::vector<double> residual;
  for (int scale : {1, 2, 4}) {
    const auto g = build_disk_grid(50 * scale);
    const HarmonicField h = poisson_extend(w, g);
    const auto at = [&](int a, int b) { return h.values[static_cast<std::size_t>(g->node_at(a, b))]; };
    const int a = j * scale, b = k * scale;
    residual.push_back(std::abs(at(a + 1, b) + at(a - 1, b) + at(a, b + 1) + at(a, b - 1) - 4.0 * at(a, b)));
  }
  EXPECT_GT(residual[0] / residual[1], 10.0);
  EXPECT_GT(residual[1] / residual[2], 12.0);
  EXPECT_LT(residual[1] / residual[2], 20.0);
}

TEST(Poisson, MaximumPrincipleAndBound) {
  const auto g = build_disk_grid(100);
  const WeldingMap w = welding_from_chains(chains_of(test::blob()));
  const HarmonicField h = poisson_extend(w, g);
  double top = 0.0, inner_top = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double m = std::abs(h.values[i]);
    top = std::max(top, m);
    if (std::abs(g->mesh.nodes[i]) < 1.0 - 1.5 / 100.0) inner_top = std::max(inner_top, m);
  }
  EXPECT_LE(inner_top, top);
  double band_top = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i)
    if (std::abs(g->mesh.nodes[i]) >= 1.0 - 1.5 / 100.0) band_top = std::max(band_top, std::abs(h.values[i]));
  EXPECT_EQ(band_top, top);
}

TEST(Poisson, RotationEquivariance) {
  const auto g = build_disk_grid(100);
  const WeldingMap w = uniform_welding(200, 0.3, 0.3);
  const HarmonicField h = poisson_extend(w, g);
  for (double alpha : {0.0, kPi / 4, kPi / 2})
    for (double beta : {0.0, kPi / 4, kPi / 2}) {
      // f'(e^{i phi}) = e^{i alpha} f(e^{i (phi + beta)}).
      WeldingMap moved;
      for (std::size_t j = 0; j < w.size(); ++j) {
        moved.phi.push_back(wrap_angle(w.phi[j] - beta));
        moved.omega.push_back(wrap_angle(w.omega[j] + alpha));
      }
      std::vector<std::size_t> order(w.size());
      for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return moved.phi[a] < moved.phi[b]; });
      WeldingMap sorted;
      for (auto j : order) {
        sorted.phi.push_back(moved.phi[j]);
        sorted.omega.push_back(moved.omega[j]);
      }
      const HarmonicField hm = poisson_extend(sorted, g);
      double worst = 0.0;
      for (std::size_t i = 0; i < g->node_count(); ++i) {
        const Complex z = g->mesh.nodes[i];
        worst = std::max(worst, std::abs(hm.values[i] - std::polar(1.0, alpha) * sample(h, std::polar(1.0, beta) * z)));
      }
      EXPECT_LE(worst, 1e-3) << "alpha " << alpha << " beta " << beta;
    }
}

TEST(Poisson, NonRotationMoebiusDoesNotCommute) {
  const auto g = build_disk_grid(100);
  WeldingMap w;
  for (int j = 0; j < 200; ++j) {
    const double phi = kTwoPi * j / 200;
    w.phi.push_back(phi);
    w.omega.push_back(wrap_angle(phi + 0.05 * (std::sin(10 * phi) + std::cos(10 * phi))));
  }
  const MoebiusTransform m = moebius_compose(MoebiusTransform::rotation(0.8), MoebiusTransform::centering({0.6, 0.6}));
  WeldingMap moved = w;
  for (std::size_t j = 0; j < w.size(); ++j) moved.omega[j] = wrap_angle(std::arg(moebius_apply(m, std::polar(1.0, w.omega[j]))));
  const HarmonicField a = poisson_extend(moved, g), b = poisson_extend(w, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) worst = std::max(worst, std::abs(a.values[i] - moebius_apply(m, b.values[i])));
  EXPECT_GT(worst, 0.01);
}

TEST(ExtensionBeltrami, IdentityWeldingIsConformal) {
  const auto g = build_disk_grid(100);
  const BeltramiField mu = extension_beltrami(uniform_welding(200), g);
  EXPECT_LT(mu.sup_norm(), 1e-3);
  const FaceDerivatives d = extension_derivatives(uniform_welding(200), {0.3, 0.2});
  EXPECT_LT(std::abs(d.fz - 1.0), 1e-4);
  EXPECT_LT(std::abs(d.fzbar), 1e-4);
}

TEST(ExtensionBeltrami, DerivativesMatchFiniteDifferencesOfTheExtension) {
  const WeldingMap w = uniform_welding(200, 0.2, 0.4);
  const auto g = build_disk_grid(100);
  const HarmonicField h = poisson_extend(w, g);
  // Central differences on lattice nodes away from the boundary.
  double worst = 0.0;
  for (int j = -60; j <= 60; j += 15)
    for (int k = -60; k <= 60; k += 15) {
      const auto at = [&](int a, int b) { return h.values[static_cast<std::size_t>(g->node_at(a, b))]; };
      const Complex hx = (at(j + 1, k) - at(j - 1, k)) * 50.0, hy = (at(j, k + 1) - at(j, k - 1)) * 50.0;
      const Complex fz = 0.5 * (hx - Complex(0, 1) * hy), fzb = 0.5 * (hx + Complex(0, 1) * hy);
      const FaceDerivatives d = extension_derivatives(w, Complex(j, k) / 100.0);
      worst = std::max({worst, std::abs(d.fz - fz), std::abs(d.fzbar - fzb)});
    }
  EXPECT_LT(worst, 1e-3);
}
