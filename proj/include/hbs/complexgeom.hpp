#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hbs/error.hpp"

namespace hbs {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Disk automorphism M(z) = e^{i theta} (z - a) / (1 - conj(a) z), |a| < 1.
struct MoebiusTransform {
  double theta = 0.0;  // in [0, 2pi)
  Complex a{0.0, 0.0};

  static MoebiusTransform identity() { return {}; }
  static MoebiusTransform rotation(double angle);
  /// F_a(z) = (z - a) / (1 - conj(a) z).
  static MoebiusTransform centering(Complex a);
};

Complex moebius_apply(const MoebiusTransform& m, Complex z);
/// Limit of M(z) as z -> infinity, i.e. -e^{i theta} / conj(a).
Complex moebius_at_infinity(const MoebiusTransform& m);
MoebiusTransform moebius_inverse(const MoebiusTransform& m);
/// outer o inner.
MoebiusTransform moebius_compose(const MoebiusTransform& outer, const MoebiusTransform& inner);

/// Wraps an angle to [0, 2pi).
double wrap_angle(double t);

/// Triangle mesh over complex nodes; faces are counterclockwise.
struct TriMesh {
  std::vector<Complex> nodes;
  std::vector<std::array<int, 3>> faces;

  double face_area(std::size_t f) const;
  Complex face_centroid(std::size_t f) const;
};

/// Lattice nodes j/M + i k/M inside the closed unit disk, triangulated square
/// by square. Each lattice square is cut along the diagonal through its corner
/// nearest the origin; triangles with a vertex outside the disk are dropped.
/// Faces are ordered row-major over squares (rows bottom to top), lower
/// triangle before upper.
struct DiskGrid {
  int resolution = 0;
  TriMesh mesh;
  std::vector<std::array<int, 2>> lattice;  // (j, k) per node
  std::vector<int> node_index;              // (k + M) * (2M + 1) + (j + M) -> node or -1
  std::vector<double> areas;
  std::vector<Complex> centroids;
  std::vector<char> on_boundary;  // node lies on a boundary edge of the mesh
  std::vector<std::array<int, 2>> square_faces;  // per lattice square, -1 if absent

  std::size_t node_count() const { return mesh.nodes.size(); }
  std::size_t face_count() const { return mesh.faces.size(); }
  int node_at(int j, int k) const;
  /// Face containing z (barycentric test, tolerance 1e-12), or -1.
  int locate(Complex z) const;
};

std::shared_ptr<const DiskGrid> build_disk_grid(int resolution);

/// Per-face complex values on a disk grid.
struct BeltramiField {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<Complex> values;

  double sup_norm() const;
};

struct FaceDerivatives {
  Complex fz;
  Complex fzbar;
};

/// Wirtinger derivatives of the piecewise-linear interpolant on each face.
std::vector<FaceDerivatives> face_derivatives(const TriMesh& mesh, const std::vector<Complex>& values);

/// mu = f_zbar / f_z per face of the piecewise-linear map given by node values.
BeltramiField beltrami_from_map(std::shared_ptr<const DiskGrid> grid, const std::vector<Complex>& values);
/// Same on an arbitrary mesh; returns per-face mu.
std::vector<Complex> beltrami_on_mesh(const TriMesh& mesh, const std::vector<Complex>& values);

/// Beltrami coefficient of g o f from mu_f, mu_g evaluated at f(z), and
/// tau = conj(f_z) / f_z.
Complex compose_beltrami(Complex mu_f, Complex mu_g_at_fz, Complex tau);

/// K = (1 + |mu|) / (1 - |mu|).
double dilation(Complex mu);

}  // namespace hbs
