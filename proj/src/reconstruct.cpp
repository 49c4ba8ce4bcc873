#include "hbs/reconstruct.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hbs/parallel.hpp"
#include "hbs/signature.hpp"

namespace hbs {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Coefficients of F_z and F_zbar in the three vertex values of a face.
struct Stencil {
  std::array<Complex, 3> dz, dzb;
  double area;
};

Stencil stencil(Complex p0, Complex p1, Complex p2) {
  const Complex e1 = p1 - p0, e2 = p2 - p0;
  const Complex det = e1 * std::conj(e2) - std::conj(e1) * e2;
  Stencil s;
  s.dz[1] = std::conj(e2) / det;
  s.dz[2] = -std::conj(e1) / det;
  s.dz[0] = -(s.dz[1] + s.dz[2]);
  s.dzb[1] = -e2 / det;
  s.dzb[2] = e1 / det;
  s.dzb[0] = -(s.dzb[1] + s.dzb[2]);
  s.area = 0.5 * (std::conj(e1) * e2).imag();
  return s;
}

std::vector<Stencil> stencils(const DiskGrid& g, const std::vector<Complex>& source) {
  std::vector<Stencil> out(g.face_count());
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const auto& t = g.mesh.faces[f];
    out[f] = stencil(source[t[0]], source[t[1]], source[t[2]]);
    if (!(out[f].area > 0.0))
      throw Error(ErrorCode::SingularSystem, "source mesh has an inverted face", "reconstruct");
  }
  return out;
}

double residual_rms(const DiskGrid& g, const std::vector<Stencil>& st, const std::vector<Complex>& values,
                    const std::vector<Complex>& mu) {
  double s = 0.0;
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const auto& t = g.mesh.faces[f];
    Complex fz{0.0, 0.0}, fzb{0.0, 0.0};
    for (int v = 0; v < 3; ++v) {
      fz += st[f].dz[v] * values[t[v]];
      fzb += st[f].dzb[v] * values[t[v]];
    }
    s += std::norm(fzb / fz - mu[f]);
  }
  return std::sqrt(s / static_cast<double>(g.face_count()));
}

// Residual of one face, sqrt(area) (F_zbar - mu F_z), as sum_v gamma_v F_v.
std::array<Complex, 3> face_gamma(const Stencil& s, Complex mu) {
  const double w = std::sqrt(s.area);
  return {w * (s.dzb[0] - mu * s.dz[0]), w * (s.dzb[1] - mu * s.dz[1]), w * (s.dzb[2] - mu * s.dz[2])};
}

void add_complex_column(std::vector<Triplet>& trip, std::size_t f, int col, Complex g) {
  // (gr + i gi)(x + i y): real row gets gr x - gi y, imaginary row gi x + gr y.
  trip.emplace_back(static_cast<int>(2 * f), col, g.real());
  trip.emplace_back(static_cast<int>(2 * f), col + 1, -g.imag());
  trip.emplace_back(static_cast<int>(2 * f + 1), col, g.imag());
  trip.emplace_back(static_cast<int>(2 * f + 1), col + 1, g.real());
}

// The lattice points (+-M, 0), (0, +-M) touch no face; the unit pin sits on
// the outermost used node of the positive real axis.
int unit_pin(const DiskGrid& g) { return g.node_at(g.resolution - 1, 0); }

std::vector<char> used_nodes(const DiskGrid& g) {
  std::vector<char> used(g.node_count(), 0);
  for (const auto& t : g.mesh.faces)
    for (int v : t) used[v] = 1;
  return used;
}

// Linear extrapolation along the axis for the four unmeshed lattice tips. When
// the boundary has been projected onto the circle the tip coincides with its
// neighbour and copies it.
void extrapolate_tips(const DiskGrid& g, std::vector<Complex>& values, bool projected = false) {
  const int M = g.resolution;
  const int dirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& d : dirs) {
    const int tip = g.node_at(M * d[0], M * d[1]);
    const int a = g.node_at((M - 1) * d[0], (M - 1) * d[1]);
    const int b = g.node_at((M - 2) * d[0], (M - 2) * d[1]);
    values[tip] = projected ? values[a] : 2.0 * values[a] - values[b];
  }
}

void check_field(const BeltramiField& mu) {
  if (!mu.grid || mu.values.size() != mu.grid->face_count())
    throw Error(ErrorCode::GridMismatch, "field does not match its grid", "reconstruct");
  if (!(mu.sup_norm() < 1.0)) throw Error(ErrorCode::NonAdmissible, "signature sup-norm must be below 1", "reconstruct");
}

}  // namespace

std::vector<Complex> disk_map_beltrami(const DiskMap& f) {
  const DiskGrid& g = *f.grid;
  const auto st = stencils(g, f.source);
  std::vector<Complex> out(g.face_count());
  for (std::size_t k = 0; k < g.face_count(); ++k) {
    const auto& t = g.mesh.faces[k];
    Complex fz{0.0, 0.0}, fzb{0.0, 0.0};
    for (int v = 0; v < 3; ++v) {
      fz += st[k].dz[v] * f.values[t[v]];
      fzb += st[k].dzb[v] * f.values[t[v]];
    }
    out[k] = fzb / fz;
  }
  return out;
}

DiskMap solve_beltrami_free(const BeltramiField& mu, double tolerance) {
  check_field(mu);
  const DiskGrid& g = *mu.grid;
  const int pin0 = g.node_at(0, 0), pin1 = unit_pin(g);
  const double pin1_value = g.mesh.nodes[pin1].real();
  DiskMap out{mu.grid, g.mesh.nodes, g.mesh.nodes, 0.0, 1};
  const auto st = stencils(g, out.source);
  const auto used = used_nodes(g);

  std::vector<int> col(g.node_count(), -1);
  int cols = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (used[v] && static_cast<int>(v) != pin0 && static_cast<int>(v) != pin1) {
      col[v] = cols;
      cols += 2;
    }
  std::vector<Triplet> trip;
  trip.reserve(g.face_count() * 12);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * g.face_count()));
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const auto& t = g.mesh.faces[f];
    const auto gam = face_gamma(st[f], mu.values[f]);
    for (int v = 0; v < 3; ++v) {
      if (col[t[v]] >= 0) {
        add_complex_column(trip, f, col[t[v]], gam[v]);
      } else if (t[v] == pin1) {
        rhs[static_cast<Eigen::Index>(2 * f)] -= pin1_value * gam[v].real();
        rhs[static_cast<Eigen::Index>(2 * f + 1)] -= pin1_value * gam[v].imag();
      }
    }
  }
  SpMat J(static_cast<Eigen::Index>(2 * g.face_count()), cols);
  J.setFromTriplets(trip.begin(), trip.end());
  const SpMat A = SpMat(J.transpose() * J);
  Eigen::SimplicialLDLT<SpMat> solver(A);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem, "free-boundary system could not be factored", "reconstruct");
  const Eigen::VectorXd x = solver.solve(J.transpose() * rhs);
  if (solver.info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorCode::SingularSystem, "free-boundary solve failed", "reconstruct");
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (col[v] >= 0) out.values[v] = {x[col[v]], x[col[v] + 1]};
  }
  out.values[pin0] = {0.0, 0.0};
  out.values[pin1] = {pin1_value, 0.0};
  extrapolate_tips(g, out.values);
  out.residual_rms = residual_rms(g, st, out.values, mu.values);
  if (!(out.residual_rms <= tolerance))
    throw Error(ErrorCode::NonConvergence, "Beltrami residual " + std::to_string(out.residual_rms) + " above tolerance",
                "reconstruct");
  return out;
}

DiskMap solve_beltrami_disk(const BeltramiField& mu, double tolerance) {
  check_field(mu);
  const DiskGrid& g = *mu.grid;
  const int pin0 = g.node_at(0, 0), pin1 = unit_pin(g);
  DiskMap out{mu.grid, g.mesh.nodes, g.mesh.nodes, 0.0, 0};
  const auto used = used_nodes(g);
  std::vector<double> angle(g.node_count(), 0.0);
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (g.on_boundary[v]) {
      out.source[v] /= std::abs(out.source[v]);
      out.values[v] = out.source[v];
      angle[v] = std::arg(out.source[v]);
    }
  const auto st = stencils(g, out.source);

  // Interior nodes carry (re, im); boundary nodes carry their angle.
  std::vector<int> col(g.node_count(), -1);
  int cols = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (!used[v] || static_cast<int>(v) == pin0 || static_cast<int>(v) == pin1) continue;
    col[v] = cols;
    cols += g.on_boundary[v] ? 1 : 2;
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(2 * g.face_count());

  const auto energy = [&](const std::vector<Complex>& vals, double t) {
    double e = 0.0;
    for (std::size_t f = 0; f < g.face_count(); ++f) {
      const auto& tri = g.mesh.faces[f];
      const auto gam = face_gamma(st[f], t * mu.values[f]);
      e += std::norm(gam[0] * vals[tri[0]] + gam[1] * vals[tri[1]] + gam[2] * vals[tri[2]]);
    }
    return e;
  };

  Eigen::SimplicialLDLT<SpMat> solver;
  bool analysed = false;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    double e = energy(out.values, t);
    for (int it = 0; it < 30; ++it) {
      std::vector<Triplet> trip;
      trip.reserve(g.face_count() * 12);
      Eigen::VectorXd r(rows);
      for (std::size_t f = 0; f < g.face_count(); ++f) {
        const auto& tri = g.mesh.faces[f];
        const auto gam = face_gamma(st[f], t * mu.values[f]);
        Complex res{0.0, 0.0};
        for (int v = 0; v < 3; ++v) {
          const int node = tri[v];
          res += gam[v] * out.values[node];
          if (col[node] < 0) continue;
          if (g.on_boundary[node]) {
            const Complex d = gam[v] * Complex{0.0, 1.0} * out.values[node];
            trip.emplace_back(static_cast<int>(2 * f), col[node], d.real());
            trip.emplace_back(static_cast<int>(2 * f + 1), col[node], d.imag());
          } else {
            add_complex_column(trip, f, col[node], gam[v]);
          }
        }
        r[static_cast<Eigen::Index>(2 * f)] = res.real();
        r[static_cast<Eigen::Index>(2 * f + 1)] = res.imag();
      }
      SpMat J(rows, cols);
      J.setFromTriplets(trip.begin(), trip.end());
      const SpMat A = SpMat(J.transpose() * J);
      if (!analysed) {
        solver.analyzePattern(A);
        analysed = true;
      }
      solver.factorize(A);
      if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SingularSystem, "disk system could not be factored", "reconstruct");
      const Eigen::VectorXd step = solver.solve(-(J.transpose() * r));
      if (!step.allFinite()) throw Error(ErrorCode::SingularSystem, "disk solve produced non-finite values", "reconstruct");
      ++out.iterations;

      // Damped update until the energy does not grow.
      double scale = 1.0;
      std::vector<Complex> trial(out.values);
      std::vector<double> trial_angle(angle);
      double e_new = e;
      for (int halving = 0; halving < 12; ++halving, scale *= 0.5) {
        for (std::size_t v = 0; v < g.node_count(); ++v) {
          if (col[v] < 0) continue;
          if (g.on_boundary[v]) {
            trial_angle[v] = angle[v] + scale * step[col[v]];
            trial[v] = std::polar(1.0, trial_angle[v]);
          } else {
            trial[v] = out.values[v] + scale * Complex{step[col[v]], step[col[v] + 1]};
          }
        }
        e_new = energy(trial, t);
        if (e_new <= e) break;
      }
      const double step_norm = scale * step.lpNorm<Eigen::Infinity>();
      if (e_new <= e) {
        out.values.swap(trial);
        angle.swap(trial_angle);
      }
      const bool done = step_norm < 1e-10 || e - e_new <= 1e-14 * std::max(e, 1e-300);
      e = std::min(e, e_new);
      if (done) break;
    }
  }
  extrapolate_tips(g, out.values, true);
  out.residual_rms = residual_rms(g, st, out.values, mu.values);
  if (!(out.residual_rms <= tolerance))
    throw Error(ErrorCode::NonConvergence, "Beltrami residual " + std::to_string(out.residual_rms) + " above tolerance",
                "reconstruct");
  return out;
}

namespace {

constexpr double kWeldOffset = 1e-10;

Complex sqrt_upper(Complex w) {
  if (w.imag() == 0.0) w = Complex(w.real(), 0.0);
  return std::sqrt(w);
}

// sqrt(u^2 - 1) with the branch asymptotic to u, for u in the closed upper half plane.
Complex glue(Complex u) { return sqrt_upper(u - 1.0) * sqrt_upper(u + 1.0); }

double glue_real(double u) { return std::copysign(std::sqrt(u * u - 1.0), u); }

// Cayley-type map sending `pole` to infinity and the disk to the upper half plane.
Complex cayley(Complex pole, Complex w) { return Complex{0.0, 1.0} * (pole + w) / (pole - w); }

bool winds_once_ccw(const std::vector<Complex>& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::arg(p[(i + 1) % p.size()] / p[i]);
    if (!(d > 0.0)) return false;
    total += d;
  }
  return std::abs(total - kTwoPi) < 1e-6;
}

Complex interior_initial(const GeodesicWeld& w, Complex z) {
  return Complex{0.0, 1.0} * sqrt_upper(w.interior_scale * (cayley(w.interior_pole, z) - w.interior_shift));
}

Complex exterior_initial(const GeodesicWeld& w, Complex z) {
  const Complex t = std::isinf(std::abs(z)) ? Complex{0.0, 1.0} : -cayley(w.exterior_pole, z);
  return sqrt_upper(w.exterior_scale * (t - w.exterior_shift));
}

Complex finish(const GeodesicWeld& w, Complex u) {
  for (std::size_t k = 0; k < w.centre.size(); ++k) u = glue((u - w.centre[k]) / w.half_width[k]);
  const Complex v = 1.0 / (u * u - w.infinity_image);
  return (v - w.affine_shift) * w.affine_scale;
}

Complex weld_disk_interior(const GeodesicWeld& w, Complex z) { return finish(w, interior_initial(w, z)); }

}  // namespace

Complex weld_interior(const GeodesicWeld& w, Complex z) {
  if (w.interior_chain) z = chain_eval(*w.interior_chain, z);
  return weld_disk_interior(w, z);
}

Complex weld_exterior(const GeodesicWeld& w, Complex z) { return finish(w, exterior_initial(w, z)); }

GeodesicWeld geodesic_weld(const std::vector<Complex>& exterior, const std::vector<Complex>& interior,
                           std::size_t pin_index, double tolerance) {
  const std::size_t n = exterior.size();
  if (interior.size() != n) throw Error(ErrorCode::WeldingMismatch, "point lists differ in length", "weld");
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "welding needs at least 3 pairs", "weld");
  if (pin_index >= n) throw Error(ErrorCode::DomainViolation, "pin index out of range", "weld");
  GeodesicWeld out;

  std::vector<Complex> a(n), z(n);
  bool on_circle = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(std::abs(exterior[k]) - 1.0) > 1e-9)
      throw Error(ErrorCode::DomainViolation, "exterior points must lie on the unit circle", "weld");
    z[k] = exterior[k] / std::abs(exterior[k]);
    on_circle = on_circle && std::abs(std::abs(interior[k]) - 1.0) <= 1e-9;
  }
  if (on_circle) {
    for (std::size_t k = 0; k < n; ++k) a[k] = interior[k] / std::abs(interior[k]);
  } else {
    Contour c;
    c.points.assign(interior.rbegin(), interior.rend());
    ZipperResult zr = [&] {
      try {
        return zipper_build(c, ChainDirection::Interior);
      } catch (const Error& e) {
        throw e.tagged("weld");
      }
    }();
    a.assign(zr.mapped.rbegin(), zr.mapped.rend());
    out.interior_chain = std::move(zr.chain);
  }
  if (!winds_once_ccw(a) || !winds_once_ccw(z))
    throw Error(ErrorCode::WeldingMismatch, "correspondence is not counterclockwise and monotone", "weld");

  // Pair order: order[0] goes to infinity, order[n-1] to 0, the pin sits mid-way.
  std::vector<std::size_t> order(n);
  const std::size_t start = (pin_index + n / 2) % n;
  for (std::size_t j = 0; j < n; ++j) order[j] = (start + j) % n;

  const Complex a_first = a[order[0]], a_last = a[order[n - 1]];
  const Complex z_first = z[order[0]], z_last = z[order[n - 1]];
  out.interior_pole = a_first;
  out.exterior_pole = z_first;
  out.interior_shift = cayley(a_first, a_last).real();
  out.exterior_shift = -cayley(z_first, z_last).real();
  // The free arc between the last and first pair lands on the positive imaginary axis, its midpoint at i.
  const Complex a_mid = a_last * std::polar(1.0, 0.5 * wrap_angle(std::arg(a_first / a_last)));
  const Complex z_mid = z_last * std::polar(1.0, 0.5 * wrap_angle(std::arg(z_first / z_last)));
  out.interior_scale = 1.0 / (cayley(a_first, a_mid).real() - out.interior_shift);
  out.exterior_scale = -1.0 / (-cayley(z_first, z_mid).real() - out.exterior_shift);
  if (!(out.interior_scale > 0.0) || !(out.exterior_scale > 0.0))
    throw Error(ErrorCode::WeldingMismatch, "degenerate gap arc", "weld");

  // Real-axis positions of the unglued pairs: interior side negative, exterior positive.
  std::vector<double> xs(n, 0.0), ys(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double x = out.interior_scale * (cayley(a_first, a[order[j]]).real() - out.interior_shift);
    const double y = out.exterior_scale * (-cayley(z_first, z[order[j]]).real() - out.exterior_shift);
    if (!(x < 0.0) || !(y > 0.0)) throw Error(ErrorCode::WeldingMismatch, "pair left its side of the axis", "weld");
    xs[j] = -std::sqrt(-x);
    ys[j] = std::sqrt(y);
  }
  std::vector<Complex> glued(n, Complex{0.0, 0.0});
  Complex zero_image = interior_initial(out, Complex{0.0, 0.0});
  if (out.interior_chain) zero_image = interior_initial(out, chain_eval(*out.interior_chain, Complex{0.0, 0.0}));
  Complex inf_image = exterior_initial(out, Complex{std::numeric_limits<double>::infinity(), 0.0});

  out.centre.reserve(n);
  out.half_width.reserve(n);
  for (std::size_t j = n - 2; j >= 1; --j) {
    const double x = xs[j], y = ys[j];
    if (!(x < 0.0 && y > 0.0)) throw Error(ErrorCode::WeldingMismatch, "gluing order broke down", "weld");
    const double c = 0.5 * (x + y), s = 0.5 * (y - x);
    out.centre.push_back(c);
    out.half_width.push_back(s);
    for (std::size_t i = 1; i < j; ++i) {
      const double ux = (xs[i] - c) / s, uy = (ys[i] - c) / s;
      if (!(ux < -1.0) || !(uy > 1.0)) throw Error(ErrorCode::WeldingMismatch, "pairs out of order", "weld");
      xs[i] = glue_real(ux);
      ys[i] = glue_real(uy);
    }
    for (std::size_t i = j + 1; i < n; ++i) glued[i] = glue((glued[i] - c) / s);
    glued[j] = 0.0;
    zero_image = glue((zero_image - c) / s);
    inf_image = glue((inf_image - c) / s);
  }
  out.infinity_image = inf_image * inf_image;
  // Last step folds the two half axes together; then exterior infinity goes to infinity.
  std::vector<Complex> image(n);
  image[0] = 0.0;  // pair at infinity
  for (std::size_t j = 1; j < n; ++j) image[j] = 1.0 / (glued[j] * glued[j] - out.infinity_image);
  const Complex z0 = 1.0 / (zero_image * zero_image - out.infinity_image);
  const std::size_t pin_pos = (pin_index + n - start) % n;
  const Complex z1 = image[pin_pos];
  if (std::abs(z1 - z0) == 0.0) throw Error(ErrorCode::WeldingMismatch, "pins coincide", "weld");
  out.affine_shift = z0;
  out.affine_scale = 1.0 / (z1 - z0);
  out.boundary.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.boundary[order[j]] = (image[j] - z0) * out.affine_scale;

  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex gi = weld_disk_interior(out, a[k] * (1.0 - kWeldOffset));
    const Complex ge = weld_exterior(out, z[k] * (1.0 + kWeldOffset));
    s += std::norm(gi - ge);
  }
  out.mismatch_rms = std::sqrt(s / static_cast<double>(n));
  if (!(out.mismatch_rms <= tolerance))
    throw Error(ErrorCode::WeldingMismatch, "boundary mismatch " + std::to_string(out.mismatch_rms), "weld");
  return out;
}

namespace {

// Boundary node angles of F, unwrapped and checked for monotonicity, sampled
// at n equally spaced source angles.
std::vector<Complex> boundary_correspondence(const DiskMap& f, std::size_t n) {
  const DiskGrid& g = *f.grid;
  std::vector<std::pair<double, Complex>> b;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (g.on_boundary[v]) b.emplace_back(wrap_angle(std::arg(f.source[v])), f.values[v]);
  std::sort(b.begin(), b.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  std::vector<double> src(b.size()), img(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    src[i] = b[i].first;
    img[i] = i == 0 ? std::arg(b[0].second) : img[i - 1] + std::arg(b[i].second / b[i - 1].second);
    if (i > 0 && !(img[i] > img[i - 1]))
      throw Error(ErrorCode::NonConvergence, "boundary of the disk map folds", "reconstruct");
  }
  if (std::abs(img.back() + std::arg(b[0].second / b.back().second) - img[0] - kTwoPi) > 1e-6)
    throw Error(ErrorCode::NonConvergence, "boundary of the disk map does not wind once", "reconstruct");
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    auto it = std::upper_bound(src.begin(), src.end(), t);
    double s0, s1, i0, i1;
    if (it == src.begin() || it == src.end()) {
      s0 = src.back() - (it == src.begin() ? kTwoPi : 0.0);
      i0 = img.back() - (it == src.begin() ? kTwoPi : 0.0);
      s1 = src.front() + (it == src.end() ? kTwoPi : 0.0);
      i1 = img.front() + (it == src.end() ? kTwoPi : 0.0);
    } else {
      const std::size_t hi = static_cast<std::size_t>(it - src.begin());
      s0 = src[hi - 1];
      i0 = img[hi - 1];
      s1 = src[hi];
      i1 = img[hi];
    }
    out[k] = std::polar(1.0, i0 + (t - s0) / (s1 - s0) * (i1 - i0));
  }
  return out;
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.tagged(stage);
  }
}

}  // namespace

ReconstructedShape reconstruct_from_map(const DiskMap& map, std::size_t n, const RunConfig& cfg) {
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "reconstruction needs at least 3 points", "reconstruct");
  ReconstructedShape out;
  out.interior = map;
  const DiskGrid& g = *out.interior.grid;
  out.pin_zero = out.interior.values[g.node_at(0, 0)];
  out.pin_one = out.interior.values[unit_pin(g)];
  const std::vector<Complex> targets = staged("reconstruct", [&] { return boundary_correspondence(out.interior, n); });
  std::vector<Complex> disk(n);
  for (std::size_t k = 0; k < n; ++k) disk[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  const GeodesicWeld weld = staged("reconstruct", [&] { return geodesic_weld(disk, targets, 0, cfg.weld_tolerance); });
  out.boundary.points = weld.boundary;
  out.boundary.orientation = Orientation::CounterClockwise;
  return out;
}

ReconstructedShape reconstruct_shape(const HbsField& b, std::size_t n, const RunConfig& cfg) {
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "reconstruction needs at least 3 points", "reconstruct");
  return reconstruct_from_map(solve_beltrami_disk(b.field, cfg.beltrami_tolerance), n, cfg);
}

double shape_distance(const Contour& a, const Contour& b) {
  if (a.size() == 0 || b.size() == 0) throw Error(ErrorCode::TooFewPoints, "empty contour", "reconstruct");
  const auto directed = [](const std::vector<Complex>& p, const std::vector<Complex>& q) {
    double worst = 0.0;
    for (const Complex& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& y : q) best = std::min(best, std::norm(x - y));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return 0.5 * (directed(a.points, b.points) + directed(b.points, a.points));
}

double diameter(const Contour& c) {
  double d = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) d = std::max(d, std::norm(c.points[i] - c.points[j]));
  return std::sqrt(d);
}

Contour normalize_shape(const Contour& c) {
  const auto& p = c.points;
  const double a2 = signed_area2(p);
  if (std::abs(a2) == 0.0) throw Error(ErrorCode::DegenerateArea, "contour has zero area", "reconstruct");
  Complex centroid{0.0, 0.0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Complex u = p[i], v = p[(i + 1) % p.size()];
    const double cr = u.real() * v.imag() - v.real() * u.imag();
    centroid += (u + v) * cr;
  }
  centroid /= 3.0 * a2;
  Contour out = c;
  const double d = diameter(c);
  for (auto& q : out.points) q = (q - centroid) / d;
  return out;
}

double aligned_shape_distance(const Contour& a, const Contour& b) {
  const Contour na = normalize_shape(a), nb = normalize_shape(b);
  const auto at = [&](double angle) {
    Contour r = nb;
    const Complex rot = std::polar(1.0, angle);
    for (auto& q : r.points) q *= rot;
    return shape_distance(na, r);
  };
  constexpr int kCoarse = 72;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarse; ++i) {
    const double v = at(kTwoPi * i / kCoarse);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement within one coarse step either side.
  const double step = kTwoPi / kCoarse;
  double lo = best * step - step, hi = best * step + step;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = at(x1), f2 = at(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = at(x2);
    }
  }
  return std::min({best_value, f1, f2});
}

}  // namespace hbs
