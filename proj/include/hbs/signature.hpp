#pragma once

#include "hbs/complexgeom.hpp"
#include "hbs/config.hpp"
#include "hbs/contour.hpp"
#include "hbs/harmonic.hpp"

namespace hbs {

/// Rotation-normalized Beltrami coefficient of the harmonic extension of a
/// shape's welding.
struct HbsField {
  BeltramiField field;
  double tau0_residual = 0.0;  // arg of the integral of B over the disk
  double tau1 = 0.0;           // arg of the integral of B / z, in [0, pi)
  bool ambiguous = false;      // rotation left unnormalized (integrals vanish)
};

/// Face-centroid sums of mu * area and mu / z * area; faces with centroid
/// inside radius 1.5 / M are left out of the second sum.
struct DiskMoments {
  Complex mean;
  Complex inverse;
};
DiskMoments disk_moments(const BeltramiField& mu);

/// Every intermediate product of the signature pipeline.
struct HbsPipeline {
  Contour boundary;  // resampled, clockwise
  NormalizedChains chains;
  WeldingMap welding;    // before rotation
  double rotation = 0.0; // H is the extension of the welding precomposed with e^{i rotation}
  HarmonicField harmonic;  // rotated extension
  HbsField signature;
};

/// Resample, zipper both sides, normalize, weld, extend, take mu and fix the
/// rotation. Errors carry the failing stage name.
HbsPipeline run_pipeline(const Contour& c, const RunConfig& cfg = {});
HbsField compute_hbs(const Contour& c, const RunConfig& cfg = {});

/// Zipper both sides of a resampled clockwise contour and apply the disk
/// normalizations.
NormalizedChains normalized_chains(const Contour& resampled, double eps);

/// Welding with its pairs shifted so that the extension evaluates H(e^{i angle} z).
WeldingMap rotate_welding(const WeldingMap& w, double angle);

/// B(z) = e^{-i tau0} mu(+-e^{i tau0 / 2} z), resampled by barycentric
/// interpolation of area-averaged node values. Rotations by multiples of
/// pi / 2 permute faces exactly. Throws AmbiguousNormalization when either
/// moment is below 1e-9.
HbsField normalize_rotation(const BeltramiField& mu);

/// e^{-2i angle} mu(e^{i angle} z) on the same grid.
BeltramiField rotate_field(const BeltramiField& mu, double angle);

/// RMS over faces of |B1 - B2|.
double hbs_distance(const HbsField& a, const HbsField& b);
double field_distance(const BeltramiField& a, const BeltramiField& b);

/// Welding normalized for direct comparison: zero-mean interior images,
/// infinity fixed, positive derivative at infinity, f(1) = 1.
WeldingMap baseline_welding(const Contour& c, const RunConfig& cfg = {});

/// RMS of |f1(z_k) - f2(z_k)| at z_k = e^{2 pi i k / samples}. Throws
/// NotNormalized unless both weldings carry the baseline normalization.
double welding_distance(const WeldingMap& a, const WeldingMap& b, std::size_t samples = 1000);

/// Limit of Phi(R) / R for the exterior map composed with its pinning, estimated
/// by a symmetric difference at R = 1e4.
Complex exterior_derivative_at_infinity(const NormalizedChains& chains);

}  // namespace hbs
