#include "hbs/complexgeom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hbs {

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

MoebiusTransform MoebiusTransform::rotation(double angle) { return {wrap_angle(angle), {0.0, 0.0}}; }

MoebiusTransform MoebiusTransform::centering(Complex a) {
  if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::NonAdmissible, "Moebius center must satisfy |a| < 1");
  return {0.0, a};
}

Complex moebius_apply(const MoebiusTransform& m, Complex z) {
  const Complex den = 1.0 - std::conj(m.a) * z;
  if (std::abs(den) < 1e-15 * (1.0 + std::abs(z))) throw Error(ErrorCode::PoleHit, "Moebius pole hit");
  return std::polar(1.0, m.theta) * (z - m.a) / den;
}

Complex moebius_at_infinity(const MoebiusTransform& m) {
  if (std::abs(m.a) == 0.0) return {INFINITY, INFINITY};
  return -std::polar(1.0, m.theta) / std::conj(m.a);
}

MoebiusTransform moebius_inverse(const MoebiusTransform& m) {
  return {wrap_angle(-m.theta), -m.a * std::polar(1.0, m.theta)};
}

namespace {

struct Mat2 {
  Complex p, q, r, s;  // (p z + q) / (r z + s)
};

Mat2 to_mat(const MoebiusTransform& m) {
  const Complex e = std::polar(1.0, m.theta);
  return {e, -e * m.a, -std::conj(m.a), 1.0};
}

MoebiusTransform from_mat(const Mat2& m) {
  const Complex p = m.p / m.s;
  const Complex q = m.q / m.s;
  MoebiusTransform out;
  out.theta = wrap_angle(std::arg(p));
  out.a = -q / p;
  return out;
}

}  // namespace

MoebiusTransform moebius_compose(const MoebiusTransform& outer, const MoebiusTransform& inner) {
  const Mat2 A = to_mat(outer), B = to_mat(inner);
  return from_mat({A.p * B.p + A.q * B.r, A.p * B.q + A.q * B.s, A.r * B.p + A.s * B.r, A.r * B.q + A.s * B.s});
}

double TriMesh::face_area(std::size_t f) const {
  const auto& t = faces[f];
  const Complex e1 = nodes[t[1]] - nodes[t[0]];
  const Complex e2 = nodes[t[2]] - nodes[t[0]];
  return 0.5 * (e1.real() * e2.imag() - e1.imag() * e2.real());
}

Complex TriMesh::face_centroid(std::size_t f) const {
  const auto& t = faces[f];
  return (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]) / 3.0;
}

int DiskGrid::node_at(int j, int k) const {
  const int M = resolution;
  if (j < -M || j > M || k < -M || k > M) return -1;
  return node_index[static_cast<std::size_t>(k + M) * (2 * M + 1) + (j + M)];
}

int DiskGrid::locate(Complex z) const {
  const int M = resolution;
  const double x = z.real() * M, y = z.imag() * M;
  const int j0 = static_cast<int>(std::floor(x)), k0 = static_cast<int>(std::floor(y));
  // Points on square edges may belong to a neighbor; scan the 3x3 block.
  for (int dk = 0; dk <= 2; ++dk)
    for (int dj = 0; dj <= 2; ++dj) {
      const int j = j0 + (dj == 0 ? 0 : (dj == 1 ? -1 : 1));
      const int k = k0 + (dk == 0 ? 0 : (dk == 1 ? -1 : 1));
      if (j < -M || j >= M || k < -M || k >= M) continue;
      for (int f : square_faces[static_cast<std::size_t>(k + M) * (2 * M) + (j + M)]) {
        if (f < 0) continue;
        const auto& t = mesh.faces[f];
        const Complex a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
        auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
        const double area = cross(b - a, c - a);
        const double l0 = cross(b - z, c - z) / area;
        const double l1 = cross(c - z, a - z) / area;
        const double l2 = 1.0 - l0 - l1;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12) return f;
      }
    }
  return -1;
}

namespace {

std::shared_ptr<const DiskGrid> make_grid(int M) {
  auto g = std::make_shared<DiskGrid>();
  g->resolution = M;
  const int side = 2 * M + 1;
  g->node_index.assign(static_cast<std::size_t>(side) * side, -1);
  const long long r2 = static_cast<long long>(M) * M;
  for (int k = -M; k <= M; ++k)
    for (int j = -M; j <= M; ++j) {
      if (static_cast<long long>(j) * j + static_cast<long long>(k) * k > r2) continue;
      g->node_index[static_cast<std::size_t>(k + M) * side + (j + M)] = static_cast<int>(g->mesh.nodes.size());
      g->mesh.nodes.emplace_back(static_cast<double>(j) / M, static_cast<double>(k) / M);
      g->lattice.push_back({j, k});
    }

  g->square_faces.assign(static_cast<std::size_t>(2 * M) * (2 * M), {-1, -1});
  auto add = [&](int j, int k, std::array<std::array<int, 2>, 3> tri, int slot) {
    std::array<int, 3> face{};
    for (int v = 0; v < 3; ++v) {
      const int id = g->node_at(tri[v][0], tri[v][1]);
      if (id < 0) return;
      face[v] = id;
    }
    g->square_faces[static_cast<std::size_t>(k + M) * (2 * M) + (j + M)][slot] = static_cast<int>(g->mesh.faces.size());
    g->mesh.faces.push_back(face);
  };
  for (int k = -M; k < M; ++k)
    for (int j = -M; j < M; ++j) {
      // Diagonal through the corner nearest the origin.
      const bool sw_ne = (j >= 0) == (k >= 0);
      if (sw_ne) {
        add(j, k, {{{j, k}, {j + 1, k}, {j + 1, k + 1}}}, 0);
        add(j, k, {{{j, k}, {j + 1, k + 1}, {j, k + 1}}}, 1);
      } else {
        add(j, k, {{{j, k}, {j + 1, k}, {j, k + 1}}}, 0);
        add(j, k, {{{j + 1, k}, {j + 1, k + 1}, {j, k + 1}}}, 1);
      }
    }

  const std::size_t F = g->mesh.faces.size();
  g->areas.resize(F);
  g->centroids.resize(F);
  for (std::size_t f = 0; f < F; ++f) {
    g->areas[f] = g->mesh.face_area(f);
    g->centroids[f] = g->mesh.face_centroid(f);
  }

  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : g->mesh.faces)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  g->on_boundary.assign(g->mesh.nodes.size(), 0);
  for (const auto& [edge, uses] : edge_use)
    if (uses == 1) g->on_boundary[edge.first] = g->on_boundary[edge.second] = 1;
  return g;
}

}  // namespace

std::shared_ptr<const DiskGrid> build_disk_grid(int resolution) {
  if (resolution < 2) throw Error(ErrorCode::ResolutionTooSmall, "disk grid resolution must be >= 2");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const DiskGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(resolution);
  if (it != cache.end()) return it->second;
  auto g = make_grid(resolution);
  cache.emplace(resolution, g);
  return g;
}

double BeltramiField::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

std::vector<FaceDerivatives> face_derivatives(const TriMesh& mesh, const std::vector<Complex>& values) {
  if (values.size() != mesh.nodes.size())
    throw Error(ErrorCode::LengthMismatch, "one value per mesh node is required");
  std::vector<FaceDerivatives> out(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    const Complex e1 = mesh.nodes[t[1]] - mesh.nodes[t[0]];
    const Complex e2 = mesh.nodes[t[2]] - mesh.nodes[t[0]];
    const Complex d1 = values[t[1]] - values[t[0]];
    const Complex d2 = values[t[2]] - values[t[0]];
    const Complex det = e1 * std::conj(e2) - std::conj(e1) * e2;
    if (std::abs(det) < 1e-300) throw Error(ErrorCode::DegenerateFace, "zero-area face");
    out[f].fz = (d1 * std::conj(e2) - d2 * std::conj(e1)) / det;
    out[f].fzbar = (e1 * d2 - e2 * d1) / det;
  }
  return out;
}

std::vector<Complex> beltrami_on_mesh(const TriMesh& mesh, const std::vector<Complex>& values) {
  const auto der = face_derivatives(mesh, values);
  std::vector<double> scale(der.size());
  for (std::size_t f = 0; f < der.size(); ++f) scale[f] = std::abs(der[f].fz) + std::abs(der[f].fzbar);
  std::vector<double> sorted = scale;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double tol = 1e-12 * sorted[sorted.size() / 2];

  std::vector<Complex> mu(der.size());
  for (std::size_t f = 0; f < der.size(); ++f) {
    if (!(std::abs(der[f].fz) > tol))
      throw Error(ErrorCode::VanishingDerivative, "f_z vanishes on face " + std::to_string(f));
    mu[f] = der[f].fzbar / der[f].fz;
  }
  return mu;
}

BeltramiField beltrami_from_map(std::shared_ptr<const DiskGrid> grid, const std::vector<Complex>& values) {
  BeltramiField out;
  out.values = beltrami_on_mesh(grid->mesh, values);
  out.grid = std::move(grid);
  return out;
}

Complex compose_beltrami(Complex mu_f, Complex mu_g_at_fz, Complex tau) {
  if (!(std::abs(mu_f) < 1.0) || !(std::abs(mu_g_at_fz) < 1.0))
    throw Error(ErrorCode::NonAdmissible, "Beltrami coefficients must have modulus < 1");
  if (std::abs(std::abs(tau) - 1.0) > 1e-9) throw Error(ErrorCode::NonAdmissible, "tau must be unimodular");
  const Complex t = mu_g_at_fz * tau;
  return (mu_f + t) / (1.0 + std::conj(mu_f) * t);
}

double dilation(Complex mu) {
  const double m = std::abs(mu);
  if (!(m < 1.0)) throw Error(ErrorCode::NonAdmissible, "dilation requires |mu| < 1");
  return (1.0 + m) / (1.0 - m);
}

}  // namespace hbs
