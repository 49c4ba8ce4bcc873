#include <gtest/gtest.h>

#include <random>

#include "hbs/zipper.hpp"
#include "support.hpp"

using namespace hbs;

TEST(Zipper, CircleLandsOnCircleAndEvaluatesConsistently) {
  const Contour c = test::circle(200);
  const ZipperResult r = zipper_build(c, ChainDirection::Interior);
  ASSERT_EQ(r.mapped.size(), 200u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(std::abs(r.mapped[i]), 1.0, 1e-6);
    EXPECT_LT(std::abs(chain_eval(r.chain, c.points[i]) - r.mapped[i]), 1e-6);
    EXPECT_LT(std::abs(chain_eval_inverse(r.chain, r.mapped[i]) - c.points[i]), 1e-6);
  }
  EXPECT_LT(std::abs(chain_eval(r.chain, 0.0)), 1.0);
}

TEST(Zipper, BoundaryImagesAreCyclicallyMonotone) {
  const ZipperResult r = zipper_build(test::blob(200), ChainDirection::Interior);
  int turns = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < r.mapped.size(); ++i) {
    const double step = std::arg(r.mapped[(i + 1) % r.mapped.size()] / r.mapped[i]);
    turns += step > 0.0 ? 1 : -1;
    total += step;
  }
  EXPECT_EQ(std::abs(turns), 200);
  EXPECT_NEAR(std::abs(total), kTwoPi, 1e-9);
}

TEST(Zipper, SquareCentroidMapsInside) {
  Contour sq;
  sq.points = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  const ZipperResult r = zipper_build(sq, ChainDirection::Interior);
  for (const auto& p : r.mapped) EXPECT_NEAR(std::abs(p), 1.0, 1e-9);
  EXPECT_LT(std::abs(chain_eval(r.chain, {0.5, 0.5})), 1.0);
}

TEST(Zipper, RepeatedPointRejected) {
  Contour c = test::circle(50);
  c.points[10] = c.points[20];
  try {
    zipper_build(c, ChainDirection::Interior);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicatePoints);
  }
}

TEST(Zipper, FarPointEscapesTheDisk) {
  const ZipperResult r = zipper_build(test::blob(200), ChainDirection::Interior);
  EXPECT_GT(std::abs(chain_eval(r.chain, {5.0, 3.0})), 1.0);
}

TEST(Zipper, InverseRoundTripOnInteriorPoints) {
  const ZipperResult r = zipper_build(test::blob(200), ChainDirection::Interior);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Complex w = std::polar(0.98 * std::sqrt(u(rng)), kTwoPi * u(rng));
    worst = std::max(worst, std::abs(chain_eval(r.chain, chain_eval_inverse(r.chain, w)) - w));
  }
  EXPECT_LE(worst, 1e-8);
  try {
    chain_eval_inverse(r.chain, {1.5, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
}

TEST(Zipper, ExteriorMapUnwindsToTheContour) {
  const Contour c = test::blob(200);
  const ZipperResult r = zipper_build(c, ChainDirection::Exterior);
  for (std::size_t i = 0; i < c.size(); i += 7)
    EXPECT_LT(std::abs(exterior_map(r.chain, 1.0 / r.mapped[i]) - c.points[i]), 1e-6);
  // An exterior point maps into the disk; an interior one does not.
  EXPECT_LT(std::abs(chain_eval(r.chain, {4.0, 1.0})), 1.0);
  EXPECT_GT(std::abs(chain_eval(r.chain, {0.05, 0.0})), 1.0);
  const Complex far = exterior_map(r.chain, Complex{std::numeric_limits<double>::infinity(), 0.0});
  EXPECT_TRUE(std::isfinite(std::abs(far)));
  EXPECT_THROW(exterior_map(r.chain, {0.5, 0.0}), Error);
}

TEST(Zipper, InverseMapOfEllipseSatisfiesCauchyRiemann) {
  const Contour c = resample_uniform(test::ellipse(2.0, 1.0, 2000), 200);
  const ZipperResult r = zipper_build(c, ChainDirection::Interior);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Complex w = std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const Complex fx = (chain_eval_inverse(r.chain, w + h) - chain_eval_inverse(r.chain, w - h)) / (2 * h);
    const Complex fy = (chain_eval_inverse(r.chain, w + Complex(0, h)) - chain_eval_inverse(r.chain, w - Complex(0, h))) / (2 * h);
    worst = std::max(worst, std::abs((fx + Complex(0, 1) * fy) / (fx - Complex(0, 1) * fy)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Zipper, InterpolatedEllipseMapConvergesWithResolution) {
  // The piecewise-linear interpolant carries a first-order error in mu.
  const Contour c = resample_uniform(test::ellipse(2.0, 1.0, 2000), 200);
  const ZipperResult r = zipper_build(c, ChainDirection::Interior);
  std::vector<double> sup;
  for (int m : {25, 50, 100}) {
    const auto g = build_disk_grid(m);
    std::vector<Complex> values(g->node_count());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = chain_eval_inverse(r.chain, g->mesh.nodes[i]);
    const auto mu = beltrami_from_map(g, values);
    double s = 0.0;
    for (std::size_t f = 0; f < mu.values.size(); ++f)
      if (std::abs(g->centroids[f]) < 0.8) s = std::max(s, std::abs(mu.values[f]));
    sup.push_back(s);
  }
  EXPECT_LT(sup[1], 0.6 * sup[0]);
  EXPECT_LT(sup[2], 0.6 * sup[1]);
  EXPECT_LT(sup[2], 0.05);
}
