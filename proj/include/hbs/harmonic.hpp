#pragma once

#include <memory>
#include <vector>

#include "hbs/complexgeom.hpp"
#include "hbs/normalize.hpp"
#include "hbs/zipper.hpp"

namespace hbs {

/// Circle homeomorphism sampled as f(e^{i phi_k}) = e^{i omega_k}. Both angle
/// lists are in [0, 2pi) and cyclically increasing.
struct WeldingMap {
  std::vector<double> phi;
  std::vector<double> omega;
  /// Set once the four baseline normalizations have been applied.
  bool baseline_normalized = false;
  std::size_t size() const { return phi.size(); }
  /// Value at an arbitrary angle, with omega interpolated linearly in phi.
  Complex operator()(double angle) const;
};

/// Zipper chains of one contour together with their disk normalizations.
struct NormalizedChains {
  ZipperResult interior;
  ZipperResult exterior;
  MoebiusTransform interior_fix;  // zero-mean centering of the interior images
  MoebiusTransform exterior_fix;  // F_c pinning infinity
};

/// Pairs phi_k = arg F_c^{-1}(1 / q_k) and omega_k = arg M(p_k), where q_k and
/// p_k are the exterior and interior chain images of the k-th contour point.
/// Pairs are returned in increasing phi order; throws MonotonicityViolation
/// unless both sequences wind once in the same direction.
WeldingMap welding_from_chains(const NormalizedChains& chains);

/// Checks n >= 3 and cyclic strict increase of both lists.
void validate_welding(const WeldingMap& w);

struct HarmonicField {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<Complex> values;  // per node
};

/// Discrete Poisson sum (1/2pi) sum_j P_r(phi_j - theta) e^{i omega_j} gamma_j
/// with gamma_j = phi_j - phi_{j-1} mod 2pi.
Complex poisson_sum(const WeldingMap& w, Complex z);

/// Harmonic extension of the welding onto the grid nodes. Interior nodes use
/// exact kernel weights over adaptively split welding intervals with omega
/// linear in phi, shifted by a constant so the origin value equals
/// poisson_sum(w, 0). Nodes with |z| = 1 take the interpolated boundary value.
HarmonicField poisson_extend(const WeldingMap& w, std::shared_ptr<const DiskGrid> grid);

/// H_z and H_zbar of the extension at an interior point, from the closed-form
/// derivative kernels integrated against the same boundary data.
FaceDerivatives extension_derivatives(const WeldingMap& w, Complex z);

/// H_zbar / H_z at every face centroid. Throws VanishingDerivative where
/// |H_z| + |H_zbar| falls below 1e-12 times its median.
BeltramiField extension_beltrami(const WeldingMap& w, std::shared_ptr<const DiskGrid> grid);

/// Max of |sum of the four lattice neighbours - 4 u| * M^2 over nodes whose
/// four neighbours all exist. `max_radius` restricts the nodes considered.
double check_harmonicity(const HarmonicField& h, double max_radius = 1.0);

}  // namespace hbs
