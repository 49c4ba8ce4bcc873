#pragma once

#include <vector>

#include "hbs/contour.hpp"
#include "hbs/error.hpp"

namespace hbs {

enum class ChainDirection { Interior, Exterior };

/// Composition of zipper stages mapping a polygonal domain (or its exterior)
/// onto the unit disk:
///   initial   g_1(z) = i sqrt((z - z_2) / (z - z_1))
///   per tip   g_k(z) = sqrt(T(z)^2 + 1),  T(z) = d z / (1 - c z)
///   terminal  (z / (1 - z / p))^2 followed by (z - i) / (z + i).
/// Every square root takes the upper-half-plane branch.
struct ConformalMapChain {
  ChainDirection direction = ChainDirection::Interior;
  Complex first{0.0, 0.0};   // z_1, sent to infinity by g_1
  Complex second{0.0, 0.0};  // z_2, sent to 0 by g_1
  std::vector<double> c;     // per-tip coefficients, c = Re q / |q|^2
  std::vector<double> d;     //                       d = Im q / |q|^2
  double terminal = 0.0;     // image of z_1 before the terminal stage (may be inf)

  std::size_t stage_count() const { return c.size() + 3; }
};

struct ZipperResult {
  ConformalMapChain chain;
  /// Images of the contour points on the unit circle, in contour order.
  std::vector<Complex> mapped;
};

/// Builds the chain from a clockwise contour. Interior chains consume the
/// points in the given order; exterior chains consume them reversed and map
/// the complement of the polygon onto the disk.
ZipperResult zipper_build(const Contour& boundary, ChainDirection direction);

/// Applies the chain to a point of its source domain. Points outside the
/// source domain land outside the closed disk.
Complex chain_eval(const ConformalMapChain& chain, Complex z);

/// Image of the point at infinity.
Complex chain_eval_infinity(const ConformalMapChain& chain);

/// Inverse map from the closed unit disk back to the source domain.
Complex chain_eval_inverse(const ConformalMapChain& chain, Complex w);

/// Phi_2(z) = chain_eval_inverse(chain, 1/z) for |z| >= 1 (z = inf allowed).
Complex exterior_map(const ConformalMapChain& chain, Complex z);

}  // namespace hbs
