#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hbs/normalize.hpp"
#include "hbs/zipper.hpp"
#include "support.hpp"

using namespace hbs;

namespace {

// Brute-force oracle: refine a square grid around the minimizer of |f(a)|.
Complex grid_refine_root(const std::vector<Complex>& p) {
  Complex best{0.0, 0.0};
  double span = 1.0;
  for (int level = 0; level < 40; ++level) {
    double best_value = center_residual(p, best);
    Complex next = best;
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) {
        const Complex a = best + span * Complex(i, j) / 10.0;
        if (std::abs(a) >= 1.0) continue;
        const double v = center_residual(p, a);
        if (v < best_value) {
          best_value = v;
          next = a;
        }
      }
    best = next;
    span *= 0.3;
  }
  return best;
}

std::vector<Complex> random_circle_points(std::mt19937_64& rng, int n, double arc) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double start = kTwoPi * u(rng);
  std::vector<Complex> p;
  for (int i = 0; i < n; ++i) p.push_back(std::polar(1.0, start + arc * u(rng)));
  return p;
}

double residual_rotation_fit(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  const Complex rot = s / std::abs(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - rot * b[i]));
  return worst;
}

}  // namespace

TEST(Centering, CubeRootsNeedNoStep) {
  const std::vector<Complex> p{1.0, std::polar(1.0, kTwoPi / 3), std::polar(1.0, 2 * kTwoPi / 3)};
  const auto r = center_boundary(p);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.transform.a, Complex(0.0, 0.0));
  EXPECT_EQ(r.transform.theta, 0.0);
  EXPECT_EQ(solve_center_equation(p), Complex(0.0, 0.0));
}

TEST(Centering, ThreePointsMatchGridRefinementOracle) {
  const std::vector<Complex> p{1.0, {0.0, 1.0}, -1.0};
  const auto r = center_boundary(p);
  Complex mean{0.0, 0.0};
  for (const auto& q : r.points) mean += q;
  EXPECT_LE(std::abs(mean) / 3.0, 1e-5);
  const Complex a = solve_center_equation(p);
  EXPECT_LE(center_residual(p, a), 1e-8);
  EXPECT_LT(std::abs(a - grid_refine_root(p)), 1e-7);
}

TEST(Centering, ClusteredArcConvergesAndIsUniqueUpToRotation) {
  std::mt19937_64 rng(17);
  const auto p = random_circle_points(rng, 200, 0.1);
  const auto r = center_boundary(p);
  Complex mean{0.0, 0.0};
  for (const auto& q : r.points) mean += q;
  EXPECT_LE(std::abs(mean) / 200.0, 1e-5);
  // Restart from a Moebius-perturbed copy.
  const auto m = MoebiusTransform{0.8, {0.3, -0.5}};
  std::vector<Complex> moved;
  for (const auto& z : p) moved.push_back(moebius_apply(m, z));
  const auto r2 = center_boundary(moved, 1e-12);
  const auto r1 = center_boundary(p, 1e-12);
  EXPECT_LE(residual_rotation_fit(r1.points, r2.points), 1e-6);
}

TEST(Centering, MeanDecreasesMonotonically) {
  std::mt19937_64 rng(2);
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = center_boundary(random_circle_points(rng, 50, trial % 2 ? 0.3 : kTwoPi));
    for (std::size_t i = 1; i < r.mean_history.size(); ++i) violations += r.mean_history[i] >= r.mean_history[i - 1];
  }
  EXPECT_EQ(violations, 0);
}

TEST(Centering, PermutationInvariant) {
  std::mt19937_64 rng(8);
  auto p = random_circle_points(rng, 40, 2.0);
  const Complex a = solve_center_equation(p);
  std::shuffle(p.begin(), p.end(), rng);
  EXPECT_LT(std::abs(solve_center_equation(p) - a), 1e-8);
}

TEST(Centering, TooFewPoints) {
  try {
    center_boundary({1.0, -1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(PinInfinity, PinnedCircleMapIsARotation) {
  const ZipperResult ext = zipper_build(test::circle(200), ChainDirection::Exterior);
  const MoebiusTransform m = pin_infinity(ext.chain);
  // The exterior map of the unit circle fixing infinity is z -> e^{i alpha} z.
  for (int k = 0; k < 8; ++k) {
    const Complex z = std::polar(2.0 + k, 0.7 * k);
    EXPECT_NEAR(std::abs(exterior_map(ext.chain, moebius_apply(m, z))), std::abs(z), 1e-5 * std::abs(z));
  }
}

TEST(PinInfinity, FixesInfinityForABlob) {
  const ZipperResult ext = zipper_build(test::blob(200), ChainDirection::Exterior);
  const MoebiusTransform m = pin_infinity(ext.chain);
  // F_c(infinity) is the preimage b = 1 / g(infinity) of infinity under Phi_2.
  const Complex b = 1.0 / chain_eval_infinity(ext.chain);
  EXPECT_LT(std::abs(moebius_at_infinity(m) - b), 1e-9 * std::abs(b));
  EXPECT_GT(std::abs(exterior_map(ext.chain, moebius_apply(m, Complex{1e6, 0.0}))), 1e3);
}
