#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hbs/complexgeom.hpp"
#include "hbs/config.hpp"
#include "hbs/contour.hpp"
#include "hbs/zipper.hpp"

namespace hbs {

struct HbsField;

/// Piecewise-linear map given by node values over a disk grid. `source` holds
/// the node positions actually used (boundary nodes may be pushed onto the
/// unit circle).
struct DiskMap {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<Complex> source;
  std::vector<Complex> values;
  double residual_rms = 0.0;  // RMS over faces of |mu_F - mu|
  int iterations = 0;
};

/// Least-squares quasiconformal map on the grid with free boundary:
/// minimizes sum_f area_f |F_zbar - mu_f F_z|^2 subject to F(0) = 0 and
/// F(p) = p at the unit pin p, the outermost meshed node on the positive real
/// axis. Lattice nodes touching no face are extrapolated. Throws SingularSystem if the normal equations cannot be factored
/// and NonConvergence if the per-face residual RMS exceeds `tolerance`.
DiskMap solve_beltrami_free(const BeltramiField& mu, double tolerance = 0.05);

/// Same energy with every boundary node constrained to the unit circle (the
/// boundary nodes are first projected radially). Gauss-Newton on the
/// interior values and boundary angles, continued from mu = 0. Pins F(0) = 0
/// and F(1) = 1, the unit pin being projected onto the circle.
DiskMap solve_beltrami_disk(const BeltramiField& mu, double tolerance = 0.05);

/// Per-face Beltrami coefficient of a DiskMap.
std::vector<Complex> disk_map_beltrami(const DiskMap& f);

/// Conformal welding of the disk to its complement: glues the points of
/// `interior` (on the boundary of the interior domain) to the matching points
/// of `exterior` (on the unit circle, seen from outside).
struct GeodesicWeld {
  // Interior side: Omega_0 -> disk (only when Omega_0 is not the disk).
  std::optional<ConformalMapChain> interior_chain;
  Complex interior_pole{1.0, 0.0}, exterior_pole{1.0, 0.0};
  double interior_shift = 0.0, exterior_shift = 0.0;
  double interior_scale = 1.0, exterior_scale = 1.0;
  std::vector<double> centre, half_width;  // gluing stages, in application order
  Complex infinity_image{0.0, 0.0};        // exterior infinity before the final inversion
  Complex affine_shift{0.0, 0.0}, affine_scale{1.0, 0.0};
  std::vector<Complex> boundary;  // glued point of each pair, in input order
  double mismatch_rms = 0.0;
};

/// `exterior`: N points on the unit circle (z_k). `interior`: N points on the
/// boundary of Omega_0 (F(z_k)); when they all lie on the unit circle Omega_0
/// is the disk. Both lists must run counterclockwise. `pin_index` names the
/// pair whose image is sent to 1; the image of 0 is sent to 0 and exterior
/// infinity stays at infinity. Throws WeldingMismatch for misordered input or
/// a boundary mismatch above `tolerance`.
GeodesicWeld geodesic_weld(const std::vector<Complex>& exterior, const std::vector<Complex>& interior,
                           std::size_t pin_index = 0, double tolerance = 1e-3);

/// g_1 on Omega_0 and g_2 on the complement of the disk (infinity allowed).
Complex weld_interior(const GeodesicWeld& w, Complex z);
Complex weld_exterior(const GeodesicWeld& w, Complex z);

struct ReconstructedShape {
  Contour boundary;  // counterclockwise
  DiskMap interior;  // F
  Complex pin_zero{0.0, 0.0};
  Complex pin_one{1.0, 0.0};
};

/// Disk-to-disk solve of B, then welding of z_k = e^{2 pi i k / n} to F(z_k).
ReconstructedShape reconstruct_shape(const HbsField& b, std::size_t n, const RunConfig& cfg = {});

/// Welding step alone, for a disk-to-disk map already solved.
ReconstructedShape reconstruct_from_map(const DiskMap& map, std::size_t n, const RunConfig& cfg = {});

/// Mean of the two directed Hausdorff distances between the point sets.
double shape_distance(const Contour& a, const Contour& b);

/// Translates to the area centroid and scales to unit diameter.
Contour normalize_shape(const Contour& c);
double diameter(const Contour& c);

/// shape_distance after normalize_shape on both and the best rotation of `b`.
double aligned_shape_distance(const Contour& a, const Contour& b);

}  // namespace hbs
